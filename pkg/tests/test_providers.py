import json
import random

import httpx
import pytest

from craftpipe import asset_core as ac
from craftpipe.behavior import validate_descriptor
from craftpipe.errors import (
    ContentRejected,
    InvalidModelReturned,
    ProviderError,
    RateLimited,
)
from craftpipe.gen_providers import (
    Capability,
    FaultInjector,
    HttpAdapterConfig,
    HttpProviderBackend,
    RateLimitPolicy,
    SlidingWindowLimiter,
    TruncatingModelGenerator,
    default_fixtures,
    mock_providers,
)
from craftpipe.gen_providers.base import ProviderRequest
from craftpipe.gen_providers.mock import MockPromptEnhancer
from craftpipe.gen_providers import prompts
from craftpipe.scale import parse_size_reply

from conftest import FakeClock


def quiet_providers(**kwargs):
    clock = FakeClock()
    return mock_providers(clock=clock, sleep=clock.sleep, **kwargs), clock


# --- prompt templates -------------------------------------------------------------


def test_enhance_template_contains_all_four_condition_bullets():
    text = prompts.enhance_request_text("alarm clock")
    for bullet in (
        "* Describe the overall image of the subject.",
        "* Capture the subject from the front.",
        "* Do not include any background.",
        "* Draw it as if it were a photograph.",
    ):
        assert bullet in text
    assert "alarm clock" in text
    assert "Generate an English prompt for image creation." in text


def test_size_template_contains_dog_example_verbatim():
    text = prompts.size_request_text()
    assert "You are an excellent surveyor." in text
    assert "from the tip of the tail to the tip of the nose" in text


def test_behavior_template_embeds_schema():
    text = prompts.behavior_request_text("a small airplane")
    assert '"primitives"' in text
    assert '"oscillate"' in text
    assert "a small airplane" in text


# --- fixtures ---------------------------------------------------------------------


def test_fixture_checksums_match_manifest():
    assert default_fixtures().verify() == []


def test_fixture_models_parse_at_unit_scale():
    fixtures = default_fixtures()
    for name in fixtures.manifest["models"]:
        doc = ac.parse_glb(fixtures.model_bytes(name))
        span = ac.longest_span(ac.compute_world_aabb(doc))
        assert 0.5 <= span <= 1.1  # provider-style near-unit normalization


# --- mock providers -----------------------------------------------------------------


def test_mock_enhance_contains_subject_and_is_deterministic():
    providers, _ = quiet_providers()
    first = providers.enhance_prompt("alarm clock")
    second = providers.enhance_prompt("alarm clock")
    assert "alarm clock" in first
    assert first == second


def test_mock_enhance_empty_rejected():
    providers, _ = quiet_providers()
    with pytest.raises(ValueError):
        providers.enhance_prompt("   ")


def test_mock_image_deterministic_and_keyword_routed():
    providers, _ = quiet_providers()
    fixtures = default_fixtures()
    image1 = providers.generate_image("a comfy chair for reading")
    image2 = providers.generate_image("a comfy chair for reading")
    assert image1 == image2
    assert fixtures.image_name_for(image1) == "chair"
    assert image1[:8] == b"\x89PNG\r\n\x1a\n"


def test_mock_image_unknown_prompt_still_deterministic():
    providers, _ = quiet_providers()
    a = providers.generate_image("xyzzy plugh")
    b = providers.generate_image("xyzzy plugh")
    assert a == b
    assert default_fixtures().image_name_for(a) is not None


def test_mock_size_estimate_chair_chain():
    providers, _ = quiet_providers()
    image = providers.generate_image("a chair")
    reply = providers.estimate_size(image)
    assert "90 cm" in reply
    assert parse_size_reply(reply).length_m == pytest.approx(0.9)


def test_estimate_size_rejects_corrupt_image():
    providers, _ = quiet_providers()
    with pytest.raises(ValueError):
        providers.estimate_size(b"not an image")


def test_mock_image_to_3d_parses_and_repeats():
    providers, _ = quiet_providers()
    image = providers.generate_image("a chair")
    glb1 = providers.image_to_3d(image)
    glb2 = providers.image_to_3d(image)
    assert glb1 == glb2
    doc = ac.parse_glb(glb1)
    span = ac.longest_span(ac.compute_world_aabb(doc))
    assert span == pytest.approx(1.0, abs=0.01)


def test_truncated_model_surfaces_invalid_model():
    clock = FakeClock()
    providers = mock_providers(
        clock=clock,
        sleep=clock.sleep,
        overrides={Capability.IMAGE_TO_3D: TruncatingModelGenerator()},
    )
    image = providers.generate_image("a chair")
    with pytest.raises(InvalidModelReturned):
        providers.image_to_3d(image)


def test_mock_behavior_airplane_and_chair():
    providers, _ = quiet_providers()
    image = providers.generate_image("an airplane")
    reply = providers.generate_behavior(image, "a small airplane flying")
    descriptor = validate_descriptor(reply)
    kinds = [p.kind for p in descriptor.primitives]
    assert kinds == ["translate", "oscillate"]

    chair_reply = providers.generate_behavior(image, "a wooden chair")
    assert chair_reply == "{}"
    assert providers.generate_behavior(image, "a wooden chair") == chair_reply


# --- retry policy -------------------------------------------------------------------


def test_retries_twice_with_backoff_then_succeeds():
    clock = FakeClock()
    flaky = FaultInjector(MockPromptEnhancer(), fail_calls={1, 2})
    providers = mock_providers(
        clock=clock, sleep=clock.sleep,
        overrides={Capability.PROMPT_ENHANCE: flaky},
    )
    start = clock.now
    result = providers.enhance_prompt("a chair")
    assert "chair" in result
    assert flaky.calls == 3
    assert clock.now - start == pytest.approx(5.0)  # backoff 1s + 4s


def test_retries_exhausted_raises():
    clock = FakeClock()
    flaky = FaultInjector(MockPromptEnhancer(), fail_calls={1, 2, 3})
    providers = mock_providers(
        clock=clock, sleep=clock.sleep,
        overrides={Capability.PROMPT_ENHANCE: flaky},
    )
    with pytest.raises(ProviderError):
        providers.enhance_prompt("a chair")
    assert flaky.calls == 3  # 1 + 2 retries, never more


def test_content_rejected_never_retried():
    clock = FakeClock()
    rejecting = FaultInjector(
        MockPromptEnhancer(),
        fail_calls={1},
        error_factory=lambda n: ContentRejected("nope"),
    )
    providers = mock_providers(
        clock=clock, sleep=clock.sleep,
        overrides={Capability.PROMPT_ENHANCE: rejecting},
    )
    with pytest.raises(ContentRejected):
        providers.enhance_prompt("a chair")
    assert rejecting.calls == 1


def test_telemetry_totals_equal_call_counts():
    providers, _ = quiet_providers()
    events = []
    providers.on_event = events.append
    for _ in range(3):
        providers.enhance_prompt("a chair")
    image = providers.generate_image("a chair")
    providers.estimate_size(image)
    stats = providers.stats
    assert stats[Capability.PROMPT_ENHANCE].calls == 3
    assert stats[Capability.IMAGE_GENERATE].calls == 1
    assert stats[Capability.SIZE_ESTIMATE].calls == 1
    assert len(events) == 5
    assert all(e["latency_ms"] >= 0 for e in events)


# --- rate limiter --------------------------------------------------------------------


def test_rate_limiter_paper_figure():
    limiter = SlidingWindowLimiter(RateLimitPolicy(150, 10.0))
    t0 = 1000.0
    for i in range(150):
        assert limiter.acquire_rate_slot(t0 + i * 0.01).proceed
    decision = limiter.acquire_rate_slot(t0 + 1.5)
    assert not decision.proceed
    assert decision.retry_after_s == pytest.approx(8.5)
    # slot frees exactly one window after the first admit
    assert limiter.acquire_rate_slot(t0 + 10.0 + 1e-9).proceed


def test_rate_limiter_empty_window_proceeds():
    limiter = SlidingWindowLimiter(RateLimitPolicy(5, 1.0))
    assert limiter.acquire_rate_slot(0.0).proceed


def test_rate_limiter_replay_oracle():
    policy = RateLimitPolicy(150, 10.0)
    limiter = SlidingWindowLimiter(policy)
    rng = random.Random(616)
    now = 0.0
    admitted = []
    for _ in range(10_000):
        now += rng.expovariate(20.0)  # bursty arrivals, ~20 req/s
        if limiter.acquire_rate_slot(now).proceed:
            admitted.append(now)
    # oracle recount: no window of length window_s may hold more than the cap
    for i, start in enumerate(admitted):
        j = i
        while j < len(admitted) and admitted[j] - start < policy.window_s:
            j += 1
        assert j - i <= policy.max_requests
    assert len(admitted) > 1000  # the limiter actually admitted traffic


# --- HTTP backends -------------------------------------------------------------------


def make_http_backend(capability, handler, **config_overrides):
    config = HttpAdapterConfig(
        name="fake-vendor",
        base_url="https://api.example.test",
        path="/v1/generate",
        auth_token="sekrit",
        **config_overrides,
    )
    transport = httpx.MockTransport(handler)
    client = httpx.Client(transport=transport)
    return HttpProviderBackend(capability, config, client=client)


def test_http_backend_sends_template_and_bearer():
    captured = {}

    def handler(request: httpx.Request) -> httpx.Response:
        captured["auth"] = request.headers.get("Authorization")
        captured["body"] = json.loads(request.read())
        return httpx.Response(200, json={"text": "enhanced!"})

    backend = make_http_backend(Capability.PROMPT_ENHANCE, handler)
    result = backend.invoke(
        ProviderRequest(Capability.PROMPT_ENHANCE, text="alarm clock")
    )
    assert result == "enhanced!"
    assert captured["auth"] == "Bearer sekrit"
    assert "* Capture the subject from the front." in captured["body"]["prompt"]
    assert "alarm clock" in captured["body"]["prompt"]


def test_http_backend_binary_response():
    def handler(request: httpx.Request) -> httpx.Response:
        return httpx.Response(200, content=b"GLBDATA")

    backend = make_http_backend(
        Capability.IMAGE_TO_3D, handler, response_format="bytes",
        request_format="multipart",
    )
    result = backend.invoke(
        ProviderRequest(Capability.IMAGE_TO_3D, image=b"\x89PNG\r\n\x1a\nx")
    )
    assert result == b"GLBDATA"


def test_http_backend_429_maps_to_rate_limited():
    def handler(request: httpx.Request) -> httpx.Response:
        return httpx.Response(429, headers={"Retry-After": "2.5"})

    backend = make_http_backend(Capability.PROMPT_ENHANCE, handler)
    with pytest.raises(RateLimited) as err:
        backend.invoke(ProviderRequest(Capability.PROMPT_ENHANCE, text="x"))
    assert err.value.retry_after_s == pytest.approx(2.5)


def test_http_backend_5xx_maps_to_provider_error():
    def handler(request: httpx.Request) -> httpx.Response:
        return httpx.Response(503, json={"error": "overloaded"})

    backend = make_http_backend(Capability.PROMPT_ENHANCE, handler)
    with pytest.raises(ProviderError):
        backend.invoke(ProviderRequest(Capability.PROMPT_ENHANCE, text="x"))


def test_http_backend_content_rejection():
    def handler(request: httpx.Request) -> httpx.Response:
        return httpx.Response(
            400, json={"content_rejected": True, "error": "policy"}
        )

    backend = make_http_backend(Capability.PROMPT_ENHANCE, handler)
    with pytest.raises(ContentRejected):
        backend.invoke(ProviderRequest(Capability.PROMPT_ENHANCE, text="x"))
