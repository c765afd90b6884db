"""Authenticated upload of assembled GLBs to a metaverse platform.

Wire format (also served by the bundled mock server):

    POST {base_url}/v1/items
    Authorization: Bearer <token>
    multipart/form-data fields: file (model/gltf-binary), name
    optional X-Idempotency-Key header
    -> 201 {"item_id": ..., "item_url": ...}

Tokens are sent as bearer headers and only ever logged as digests.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field

import httpx

from ..behavior import ScriptTemplateSet
from ..errors import AuthFailed, PlatformRejected, TransportError
from ..mesh_budget import PlatformProfile
from ..resources import load_text

RETRY_BACKOFF_S = (1.0, 4.0)

MAX_NAME_LENGTH = 64


def cluster_like_templates() -> ScriptTemplateSet:
    return ScriptTemplateSet(
        name="cluster-like",
        skeleton=load_text("script_templates/cluster_like_skeleton.txt"),
        primitive_templates={
            "translate": load_text("script_templates/cluster_like_translate.txt"),
            "rotate": load_text("script_templates/cluster_like_rotate.txt"),
            "oscillate": load_text("script_templates/cluster_like_oscillate.txt"),
            "orbit": load_text("script_templates/cluster_like_orbit.txt"),
        },
    )


@dataclass(frozen=True)
class PlatformAdapter:
    """Everything platform-specific: limits, upload endpoint, script dialect."""

    name: str
    base_url: str
    profile: PlatformProfile = field(default_factory=PlatformProfile)
    script_templates: ScriptTemplateSet = field(default_factory=cluster_like_templates)
    upload_path: str = "/v1/items"
    timeout_s: float = 60.0
    max_retries: int = 2
    idempotent: bool = False

    def __post_init__(self):
        for kind in ("translate", "rotate"):
            if not self.script_templates.supports(kind):
                raise ValueError(
                    f"adapter {self.name!r} script templates must cover {kind!r}"
                )


@dataclass(frozen=True)
class UploadReceipt:
    item_id: str
    item_url: str
    uploaded_bytes: int
    timestamp: float

    def __post_init__(self):
        if not self.item_id:
            raise ValueError("item_id must be non-empty on success")


def cluster_like_adapter(base_url: str, profile=None, **kwargs) -> PlatformAdapter:
    return PlatformAdapter(
        name="cluster-like",
        base_url=base_url,
        profile=profile or PlatformProfile(),
        **kwargs,
    )


class PlatformGateway:
    def __init__(self, adapter: PlatformAdapter, client=None, sleep=time.sleep,
                 clock=time.time):
        self.adapter = adapter
        self.sleep = sleep
        self.clock = clock
        self._client = client or httpx.Client(timeout=adapter.timeout_s)

    def upload(
        self, glb: bytes, name: str, token: str, script_text: str | None = None
    ) -> UploadReceipt:
        """Upload one assembled GLB; returns a receipt on 2xx.

        `script_text` is the behavior rendered in the platform's script
        dialect, sent as an extra multipart field when present. Raises
        AuthFailed (401/403), PlatformRejected (other 4xx, with the
        platform's reason), or TransportError (timeouts / 5xx after retries).
        """
        if not 1 <= len(name) <= MAX_NAME_LENGTH:
            raise ValueError(f"name must be 1..{MAX_NAME_LENGTH} chars")
        if not token:
            raise AuthFailed("missing platform token")

        headers = {"Authorization": f"Bearer {token}"}
        if self.adapter.idempotent:
            key = hashlib.sha256(glb + name.encode("utf-8")).hexdigest()
            headers["X-Idempotency-Key"] = key

        data = {"name": name}
        if script_text is not None:
            data["script"] = script_text

        url = self.adapter.base_url.rstrip("/") + self.adapter.upload_path
        attempt = 0
        while True:
            try:
                response = self._client.post(
                    url,
                    files={"file": ("model.glb", glb, "model/gltf-binary")},
                    data=data,
                    headers=headers,
                )
            except httpx.HTTPError as exc:
                if attempt >= self.adapter.max_retries:
                    raise TransportError(f"upload transport failure: {exc}") from exc
                self.sleep(RETRY_BACKOFF_S[min(attempt, len(RETRY_BACKOFF_S) - 1)])
                attempt += 1
                continue

            if response.status_code in (401, 403):
                raise AuthFailed(f"platform rejected token (HTTP {response.status_code})")
            if 400 <= response.status_code < 500:
                raise PlatformRejected(
                    _reason(response), status=response.status_code
                )
            if response.status_code >= 500:
                if attempt >= self.adapter.max_retries:
                    raise TransportError(
                        f"platform HTTP {response.status_code} after "
                        f"{attempt + 1} attempts"
                    )
                self.sleep(RETRY_BACKOFF_S[min(attempt, len(RETRY_BACKOFF_S) - 1)])
                attempt += 1
                continue

            try:
                body = response.json()
                return UploadReceipt(
                    item_id=body["item_id"],
                    item_url=body["item_url"],
                    uploaded_bytes=len(glb),
                    timestamp=self.clock(),
                )
            except (ValueError, KeyError) as exc:
                raise PlatformRejected(
                    f"malformed platform response: {exc}", status=response.status_code
                ) from exc


def _reason(response) -> str:
    try:
        body = response.json()
        return str(body.get("error") or body)[:200]
    except ValueError:
        return response.text[:200]
