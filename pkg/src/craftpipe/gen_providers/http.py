"""Thin HTTP adapters for real text/image/3D generation services.

Vendors differ only in config (base URL, auth header, payload mapping), so
one backend class covers all five capabilities. The prompt templates are
rendered here, on the request side, exactly as stored in resources/.
"""

from __future__ import annotations

import base64
from dataclasses import dataclass, field

import httpx

from ..errors import ContentRejected, ProviderError, RateLimited
from .base import Capability
from . import prompts


@dataclass(frozen=True)
class HttpAdapterConfig:
    name: str
    base_url: str
    path: str
    auth_token: str = ""
    request_format: str = "json"  # json | multipart
    text_field: str = "prompt"
    image_field: str = "image"
    response_format: str = "json:text"  # json:FIELD | json_b64:FIELD | bytes
    timeout_s: float = 60.0
    extra_headers: dict = field(default_factory=dict)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "HttpAdapterConfig":
        return cls(**obj)


def render_request_text(capability: Capability, text: str) -> str:
    """Provider-facing prompt for a capability (verbatim templates included)."""
    if capability == Capability.PROMPT_ENHANCE:
        return prompts.enhance_request_text(text)
    if capability == Capability.SIZE_ESTIMATE:
        return prompts.size_request_text()
    if capability == Capability.BEHAVIOR_GENERATE:
        return prompts.behavior_request_text(text)
    return text  # image generation uses the enhanced prompt as-is


class HttpProviderBackend:
    """One capability served over HTTPS with bearer-token auth."""

    def __init__(
        self, capability: Capability, config: HttpAdapterConfig, client=None
    ):
        self.capability = capability
        self.config = config
        self.name = f"http:{config.name}"
        self._client = client or httpx.Client(timeout=config.timeout_s)

    def _headers(self) -> dict:
        headers = dict(self.config.extra_headers)
        if self.config.auth_token:
            headers["Authorization"] = f"Bearer {self.config.auth_token}"
        return headers

    def invoke(self, request):
        cfg = self.config
        url = cfg.base_url.rstrip("/") + cfg.path
        text = render_request_text(self.capability, request.text)
        try:
            if cfg.request_format == "multipart":
                files = {}
                data = {}
                if request.image is not None:
                    files[cfg.image_field] = ("input.png", request.image, "image/png")
                if text:
                    data[cfg.text_field] = text
                response = self._client.post(
                    url, files=files, data=data, headers=self._headers()
                )
            else:
                payload = {}
                if text:
                    payload[cfg.text_field] = text
                if request.image is not None:
                    payload[cfg.image_field] = base64.b64encode(request.image).decode()
                response = self._client.post(
                    url, json=payload, headers=self._headers()
                )
        except httpx.HTTPError as exc:
            raise ProviderError(f"{self.name}: transport failure: {exc}") from exc

        if response.status_code == 429:
            retry_after = response.headers.get("Retry-After")
            raise RateLimited(float(retry_after) if retry_after else None)
        if response.status_code in (400, 422, 451) and _is_content_rejection(response):
            raise ContentRejected(f"{self.name}: {_error_reason(response)}")
        if response.status_code >= 400:
            raise ProviderError(
                f"{self.name}: HTTP {response.status_code}: {_error_reason(response)}"
            )

        return self._decode(response)

    def _decode(self, response):
        fmt = self.config.response_format
        if fmt == "bytes":
            return response.content
        kind, _, fname = fmt.partition(":")
        try:
            value = response.json()[fname]
        except (ValueError, KeyError, TypeError) as exc:
            raise ProviderError(
                f"{self.name}: malformed response (wanted {fmt})"
            ) from exc
        if kind == "json_b64":
            try:
                return base64.b64decode(value)
            except (ValueError, TypeError) as exc:
                raise ProviderError(f"{self.name}: invalid base64 payload") from exc
        return value


def _error_reason(response) -> str:
    try:
        body = response.json()
        return str(body.get("error") or body.get("message") or body)[:200]
    except ValueError:
        return response.text[:200]


def _is_content_rejection(response) -> bool:
    try:
        body = response.json()
    except ValueError:
        return False
    return bool(body.get("content_rejected"))
