"""Service configuration: one JSON file plus CRAFTPIPE_* env overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

from ..gen_providers import (
    Capability,
    HttpAdapterConfig,
    HttpProviderBackend,
    Providers,
    RateLimitPolicy,
    SlidingWindowLimiter,
    mock_providers,
)
from ..mesh_budget import PlatformProfile
from ..pipeline import BlobStore, EventLog, PipelineEngine, restore_sessions
from ..platform_gateway import (
    MockPlatformConfig,
    MockPlatformServer,
    PlatformGateway,
    cluster_like_adapter,
)

ENV_PREFIX = "CRAFTPIPE_"


@dataclass(frozen=True)
class ApiConfig:
    listen_host: str = "127.0.0.1"
    listen_port: int = 8008
    providers: str = "mock"  # "mock" | "real"
    provider_http: dict = field(default_factory=dict)  # capability -> adapter obj
    platform_base_url: str = ""  # empty: start the in-process mock platform
    platform_tokens: tuple = ("test-token",)
    profile: PlatformProfile = field(default_factory=PlatformProfile)
    rate_limit: RateLimitPolicy = field(
        default_factory=lambda: RateLimitPolicy(150, 10.0)
    )
    blob_store_path: str = "data/blobs"
    log_path: str = "data/logs"
    restore_on_start: bool = True

    @classmethod
    def from_json_obj(cls, obj: dict) -> "ApiConfig":
        kwargs = {}
        for key in (
            "listen_host", "listen_port", "providers", "provider_http",
            "platform_base_url", "blob_store_path", "log_path", "restore_on_start",
        ):
            if key in obj:
                kwargs[key] = obj[key]
        if "platform_tokens" in obj:
            kwargs["platform_tokens"] = tuple(obj["platform_tokens"])
        if "profile" in obj:
            kwargs["profile"] = PlatformProfile.from_json_obj(obj["profile"])
        if "rate_limit" in obj:
            kwargs["rate_limit"] = RateLimitPolicy(
                obj["rate_limit"]["max_requests"], obj["rate_limit"]["window_s"]
            )
        return cls(**kwargs)


def load_config(path=None, env=None) -> ApiConfig:
    env = os.environ if env is None else env
    config = ApiConfig()
    if path is not None:
        config = ApiConfig.from_json_obj(
            json.loads(Path(path).read_text(encoding="utf-8"))
        )
    overrides = {}
    simple = {
        "LISTEN_HOST": ("listen_host", str),
        "LISTEN_PORT": ("listen_port", int),
        "PROVIDERS": ("providers", str),
        "PLATFORM_BASE_URL": ("platform_base_url", str),
        "BLOB_STORE_PATH": ("blob_store_path", str),
        "LOG_PATH": ("log_path", str),
    }
    for suffix, (attr, cast) in simple.items():
        value = env.get(ENV_PREFIX + suffix)
        if value is not None:
            overrides[attr] = cast(value)
    tokens = env.get(ENV_PREFIX + "PLATFORM_TOKENS")
    if tokens is not None:
        overrides["platform_tokens"] = tuple(t for t in tokens.split(",") if t)
    return replace(config, **overrides) if overrides else config


class ServiceStack:
    """Composition root: storage, providers, gateway, engine, mock platform."""

    def __init__(self, config: ApiConfig):
        self.config = config
        self.blobs = BlobStore(config.blob_store_path)
        self.events = EventLog(config.log_path)
        self.limiter = SlidingWindowLimiter(config.rate_limit)
        self.mock_platform = None

        def provider_event(payload: dict):
            payload = dict(payload)
            self.events.append(
                payload.pop("session_id", ""), payload.pop("kind"), **payload
            )

        if config.providers == "real":
            backends = {}
            for cap in Capability:
                entry = config.provider_http.get(cap.value)
                if entry is None:
                    raise ValueError(
                        f"providers=real requires provider_http[{cap.value!r}]"
                    )
                backends[cap] = HttpProviderBackend(
                    cap, HttpAdapterConfig.from_json_obj(entry)
                )
            self.providers = Providers(
                backends[Capability.PROMPT_ENHANCE],
                backends[Capability.IMAGE_GENERATE],
                backends[Capability.SIZE_ESTIMATE],
                backends[Capability.IMAGE_TO_3D],
                backends[Capability.BEHAVIOR_GENERATE],
                rate_limiter=self.limiter,
                on_event=provider_event,
            )
        else:
            self.providers = mock_providers(
                rate_limiter=self.limiter, on_event=provider_event
            )

        base_url = config.platform_base_url
        if not base_url:
            self.mock_platform = MockPlatformServer(
                MockPlatformConfig(
                    valid_tokens=config.platform_tokens, profile=config.profile
                )
            )
            base_url = self.mock_platform.base_url
        adapter = cluster_like_adapter(base_url, profile=config.profile)
        self.gateway = PlatformGateway(adapter)

        self.engine = PipelineEngine(
            providers=self.providers,
            gateway=self.gateway,
            blob_store=self.blobs,
            event_log=self.events,
            profile=config.profile,
        )
        if config.restore_on_start:
            restored = restore_sessions(self.blobs, self.events.read_all())
            self.engine.sessions.update(restored)

    def close(self):
        if self.mock_platform is not None:
            self.mock_platform.stop()
