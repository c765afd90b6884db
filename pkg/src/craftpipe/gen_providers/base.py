"""Capability-based provider contract with retries, rate limiting, telemetry.

Backends are small objects with a ``name`` and an ``invoke(request)`` that
returns the raw payload (text or bytes). The ``Providers`` facade owns
everything around the call: preconditions, the shared rate limiter, bounded
retries, latency accounting, and post-validation of returned payloads.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum
from threading import Lock

from ..asset_core.glb import parse_glb
from ..errors import (
    ContentRejected,
    CraftError,
    InvalidModelReturned,
    ProviderError,
    RateLimited,
)
from .rate_limit import wait_for_slot

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"
JPEG_MAGIC = b"\xff\xd8\xff"

RETRY_BACKOFF_S = (1.0, 4.0)  # two automatic retries, exponential


class Capability(str, Enum):
    PROMPT_ENHANCE = "prompt_enhance"
    IMAGE_GENERATE = "image_generate"
    SIZE_ESTIMATE = "size_estimate"
    IMAGE_TO_3D = "image_to_3d"
    BEHAVIOR_GENERATE = "behavior_generate"


@dataclass(frozen=True)
class ProviderRequest:
    capability: Capability
    text: str = ""
    image: bytes | None = None
    session_id: str = ""
    attempt: int = 1

    def __post_init__(self):
        if self.attempt < 1:
            raise ValueError("attempt must be >= 1")


@dataclass(frozen=True)
class ProviderResponse:
    capability: Capability
    payload: object  # str or bytes, per capability
    latency_ms: float
    provider_name: str
    attempt: int

    def __post_init__(self):
        if self.latency_ms < 0:
            raise ValueError("latency_ms must be >= 0")


def is_supported_image(data: bytes) -> bool:
    return isinstance(data, (bytes, bytearray)) and (
        bytes(data[:8]) == PNG_MAGIC or bytes(data[:3]) == JPEG_MAGIC
    )


@dataclass
class CallStats:
    calls: int = 0
    failures: int = 0
    total_latency_ms: float = 0.0


class Providers:
    """Uniform entry point for the five generative capabilities."""

    def __init__(
        self,
        prompt_enhancer,
        image_generator,
        size_estimator,
        model_generator,
        behavior_generator,
        rate_limiter=None,
        max_retries: int = 2,
        clock=time.time,
        sleep=time.sleep,
        on_event=None,
    ):
        self._backends = {
            Capability.PROMPT_ENHANCE: prompt_enhancer,
            Capability.IMAGE_GENERATE: image_generator,
            Capability.SIZE_ESTIMATE: size_estimator,
            Capability.IMAGE_TO_3D: model_generator,
            Capability.BEHAVIOR_GENERATE: behavior_generator,
        }
        self.rate_limiter = rate_limiter
        self.max_retries = max_retries
        self.clock = clock
        self.sleep = sleep
        self.on_event = on_event
        self.stats = {cap: CallStats() for cap in Capability}
        self._stats_lock = Lock()

    # --- plumbing ---------------------------------------------------------------

    def _record(self, capability, ok: bool, latency_ms: float):
        with self._stats_lock:
            entry = self.stats[capability]
            entry.calls += 1
            entry.total_latency_ms += latency_ms
            if not ok:
                entry.failures += 1

    def _emit(self, payload: dict):
        if self.on_event is not None:
            self.on_event(payload)

    def _call(self, capability, text="", image=None, session_id="", validate=None):
        backend = self._backends[capability]
        attempt = 1
        while True:
            wait_for_slot(self.rate_limiter, clock=self.clock, sleep=self.sleep)
            request = ProviderRequest(capability, text, image, session_id, attempt)
            started = self.clock()
            try:
                payload = backend.invoke(request)
                if validate is not None:
                    validate(payload)
            except (ContentRejected, RateLimited) as exc:
                latency = (self.clock() - started) * 1000.0
                self._record(capability, False, latency)
                self._emit(
                    {
                        "kind": "provider_call",
                        "capability": capability.value,
                        "provider": backend.name,
                        "session_id": session_id,
                        "attempt": attempt,
                        "ok": False,
                        "error": type(exc).__name__,
                        "latency_ms": latency,
                    }
                )
                raise
            except (ProviderError, InvalidModelReturned) as exc:
                latency = (self.clock() - started) * 1000.0
                self._record(capability, False, latency)
                self._emit(
                    {
                        "kind": "provider_call",
                        "capability": capability.value,
                        "provider": backend.name,
                        "session_id": session_id,
                        "attempt": attempt,
                        "ok": False,
                        "error": type(exc).__name__,
                        "latency_ms": latency,
                    }
                )
                if attempt > self.max_retries:
                    raise
                self.sleep(RETRY_BACKOFF_S[min(attempt, len(RETRY_BACKOFF_S)) - 1])
                attempt += 1
                continue
            latency = (self.clock() - started) * 1000.0
            self._record(capability, True, latency)
            self._emit(
                {
                    "kind": "provider_call",
                    "capability": capability.value,
                    "provider": backend.name,
                    "session_id": session_id,
                    "attempt": attempt,
                    "ok": True,
                    "latency_ms": latency,
                }
            )
            return ProviderResponse(capability, payload, latency, backend.name, attempt)

    # --- capabilities -----------------------------------------------------------

    def enhance_prompt(self, user_text: str, session_id: str = "") -> str:
        if not user_text or not user_text.strip():
            raise ValueError("user_text must be non-empty")
        response = self._call(
            Capability.PROMPT_ENHANCE, text=user_text, session_id=session_id,
            validate=_expect_text,
        )
        return response.payload

    def generate_image(self, prompt: str, session_id: str = "") -> bytes:
        if not prompt or not prompt.strip():
            raise ValueError("prompt must be non-empty")
        response = self._call(
            Capability.IMAGE_GENERATE, text=prompt, session_id=session_id,
            validate=_expect_png,
        )
        return response.payload

    def estimate_size(self, image: bytes, session_id: str = "") -> str:
        if not is_supported_image(image):
            raise ValueError("image must be PNG or JPEG bytes")
        response = self._call(
            Capability.SIZE_ESTIMATE, image=image, session_id=session_id,
            validate=_expect_text,
        )
        return response.payload

    def image_to_3d(self, image: bytes, session_id: str = "") -> bytes:
        if not is_supported_image(image):
            raise ValueError("image must be PNG or JPEG bytes")
        response = self._call(
            Capability.IMAGE_TO_3D, image=image, session_id=session_id,
            validate=_expect_glb,
        )
        return response.payload

    def generate_behavior(
        self, image: bytes | None, description: str, session_id: str = ""
    ) -> str:
        if image is None and not description:
            raise ValueError("need an image or a description")
        if image is not None and not is_supported_image(image):
            raise ValueError("image must be PNG or JPEG bytes")
        response = self._call(
            Capability.BEHAVIOR_GENERATE, text=description, image=image,
            session_id=session_id, validate=_expect_text,
        )
        return response.payload


def _expect_text(payload):
    if not isinstance(payload, str) or not payload:
        raise ProviderError(f"expected non-empty text, got {type(payload).__name__}")


def _expect_png(payload):
    if not isinstance(payload, (bytes, bytearray)) or not is_supported_image(payload):
        raise ProviderError("provider did not return a PNG/JPEG image")


def _expect_glb(payload):
    if not isinstance(payload, (bytes, bytearray)):
        raise InvalidModelReturned("provider returned non-bytes for a model")
    try:
        parse_glb(bytes(payload))
    except (CraftError, ValueError) as exc:
        raise InvalidModelReturned(f"provider model does not parse: {exc}") from exc
