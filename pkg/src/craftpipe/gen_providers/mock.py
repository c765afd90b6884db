"""Deterministic mock backends for every generative capability.

Mocks are pure functions of their inputs: images and models come from a
committed fixture directory with a checksum manifest, keyed by prompt
keywords and image digests, so the full pipeline runs offline and repeat
calls are byte-identical. A fault injector wrapper lets tests schedule
provider failures call-by-call.
"""

from __future__ import annotations

import hashlib
import json
import threading
from importlib import resources as _resources

from ..errors import ProviderError

_FIXTURE_ROOT = _resources.files("craftpipe") / "gen_providers" / "fixtures"

# prompt keyword -> image fixture name (first match wins, scanned in order)
KEYWORD_ROUTES = (
    ("chair", "chair"),
    ("drill", "drill"),
    ("airplane", "airplane"),
    ("aircraft", "airplane"),
    ("plane", "airplane"),
    ("clock", "clock"),
    ("alarm", "clock"),
    ("cube", "cube"),
    ("box", "cube"),
)

# description keyword -> behavior descriptor JSON text reply
BEHAVIOR_REPLIES = (
    (
        "airplane",
        json.dumps(
            {
                "version": 1,
                "duration_s": "loop",
                "primitives": [
                    {"translate": {"velocity": [0.0, 0.0, 0.6]}},
                    {
                        "oscillate": {
                            "axis": [0.0, 1.0, 0.0],
                            "amplitude_m": 0.2,
                            "period_s": 3.0,
                        }
                    },
                ],
            }
        ),
    ),
    ("chair", "{}"),  # negative fixture: schema-invalid empty reply
    (
        "drill",
        json.dumps(
            {
                "version": 1,
                "duration_s": "loop",
                "primitives": [
                    {"rotate": {"axis": [1.0, 0.0, 0.0], "deg_per_s": 540.0}}
                ],
            }
        ),
    ),
)

DEFAULT_BEHAVIOR_REPLY = json.dumps(
    {
        "version": 1,
        "duration_s": "loop",
        "primitives": [{"rotate": {"axis": [0.0, 1.0, 0.0], "deg_per_s": 45.0}}],
    }
)

UNKNOWN_SIZE_REPLY = "I cannot tell."


class FixtureSet:
    """Committed fixture files plus their checksum manifest."""

    def __init__(self, root=_FIXTURE_ROOT):
        self.root = root
        self.manifest = json.loads((root / "manifest.json").read_text("utf-8"))
        self._image_by_sha = {
            entry["sha256"]: name for name, entry in self.manifest["images"].items()
        }

    def image_bytes(self, name: str) -> bytes:
        return (self.root / self.manifest["images"][name]["file"]).read_bytes()

    def model_bytes(self, name: str) -> bytes:
        return (self.root / self.manifest["models"][name]["file"]).read_bytes()

    def image_names(self) -> list:
        return sorted(self.manifest["images"])

    def image_name_for(self, image: bytes) -> str | None:
        return self._image_by_sha.get(hashlib.sha256(image).hexdigest())

    def binding_for(self, image: bytes) -> dict | None:
        name = self.image_name_for(image)
        if name is None:
            return None
        return self.manifest["bindings"][name]

    def verify(self) -> list:
        """Names whose file bytes no longer match the manifest checksum."""
        bad = []
        for section in ("images", "models"):
            for name, entry in self.manifest[section].items():
                digest = hashlib.sha256(
                    (self.root / entry["file"]).read_bytes()
                ).hexdigest()
                if digest != entry["sha256"]:
                    bad.append(f"{section}/{name}")
        return bad


_default_fixtures = None
_fixture_lock = threading.Lock()


def default_fixtures() -> FixtureSet:
    global _default_fixtures
    with _fixture_lock:
        if _default_fixtures is None:
            _default_fixtures = FixtureSet()
        return _default_fixtures


def route_keyword(text: str) -> str | None:
    lowered = text.lower()
    for keyword, fixture in KEYWORD_ROUTES:
        if keyword in lowered:
            return fixture
    return None


class MockPromptEnhancer:
    name = "mock-enhance"

    def invoke(self, request) -> str:
        subject = request.text.strip()
        return (
            f"A detailed photograph-style image of {subject}, captured from "
            f"the front, whole object visible, no background."
        )


class MockImageGenerator:
    name = "mock-image"

    def __init__(self, fixtures: FixtureSet | None = None):
        self.fixtures = fixtures or default_fixtures()

    def invoke(self, request) -> bytes:
        name = route_keyword(request.text)
        if name is None:
            names = self.fixtures.image_names()
            digest = hashlib.sha256(request.text.encode("utf-8")).digest()
            name = names[int.from_bytes(digest[:4], "big") % len(names)]
        return self.fixtures.image_bytes(name)


class MockSizeEstimator:
    name = "mock-size"

    def __init__(self, fixtures: FixtureSet | None = None):
        self.fixtures = fixtures or default_fixtures()

    def invoke(self, request) -> str:
        binding = self.fixtures.binding_for(request.image)
        if binding is None:
            return UNKNOWN_SIZE_REPLY
        return binding["size_reply"]


class MockModelGenerator:
    name = "mock-model"

    def __init__(self, fixtures: FixtureSet | None = None):
        self.fixtures = fixtures or default_fixtures()

    def invoke(self, request) -> bytes:
        binding = self.fixtures.binding_for(request.image)
        model_name = binding["model"] if binding else "cube"
        return self.fixtures.model_bytes(model_name)


class MockBehaviorGenerator:
    name = "mock-behavior"

    def invoke(self, request) -> str:
        lowered = request.text.lower()
        for keyword, reply in BEHAVIOR_REPLIES:
            if keyword in lowered:
                return reply
        return DEFAULT_BEHAVIOR_REPLY


class TruncatingModelGenerator:
    """Fault fixture: returns a truncated GLB that cannot parse."""

    name = "mock-model-truncating"

    def __init__(self, fixtures: FixtureSet | None = None):
        self.fixtures = fixtures or default_fixtures()

    def invoke(self, request) -> bytes:
        return self.fixtures.model_bytes("cube")[:40]


class FaultInjector:
    """Wraps a backend and fails on a scheduled set of call numbers (1-based).

    The schedule counts every invocation of this wrapper, so with retries a
    single pipeline step can consume several schedule slots.
    """

    def __init__(self, inner, fail_calls, error_factory=None):
        self.inner = inner
        self.name = f"{inner.name}+faults"
        self.fail_calls = frozenset(fail_calls)
        self.error_factory = error_factory or (
            lambda n: ProviderError(f"injected fault on call {n}")
        )
        self.calls = 0
        self._lock = threading.Lock()

    def invoke(self, request):
        with self._lock:
            self.calls += 1
            n = self.calls
        if n in self.fail_calls:
            raise self.error_factory(n)
        return self.inner.invoke(request)


def mock_providers(
    fixtures: FixtureSet | None = None,
    rate_limiter=None,
    clock=None,
    sleep=None,
    on_event=None,
    max_retries: int = 2,
    overrides: dict | None = None,
):
    """A fully-mocked Providers facade; `overrides` swaps individual backends
    (keyed by Capability) for fault-injection tests."""
    import time as _time

    from .base import Capability, Providers

    fixtures = fixtures or default_fixtures()
    backends = {
        Capability.PROMPT_ENHANCE: MockPromptEnhancer(),
        Capability.IMAGE_GENERATE: MockImageGenerator(fixtures),
        Capability.SIZE_ESTIMATE: MockSizeEstimator(fixtures),
        Capability.IMAGE_TO_3D: MockModelGenerator(fixtures),
        Capability.BEHAVIOR_GENERATE: MockBehaviorGenerator(),
    }
    if overrides:
        backends.update(overrides)
    return Providers(
        backends[Capability.PROMPT_ENHANCE],
        backends[Capability.IMAGE_GENERATE],
        backends[Capability.SIZE_ESTIMATE],
        backends[Capability.IMAGE_TO_3D],
        backends[Capability.BEHAVIOR_GENERATE],
        rate_limiter=rate_limiter,
        max_retries=max_retries,
        clock=clock or _time.time,
        sleep=sleep or _time.sleep,
        on_event=on_event,
    )
