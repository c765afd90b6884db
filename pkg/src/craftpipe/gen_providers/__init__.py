"""Generative provider contract: mock and HTTP backends, templates, limits."""

from .base import Capability, ProviderRequest, ProviderResponse, Providers
from .http import HttpAdapterConfig, HttpProviderBackend
from .mock import (
    FaultInjector,
    FixtureSet,
    MockBehaviorGenerator,
    MockImageGenerator,
    MockModelGenerator,
    MockPromptEnhancer,
    MockSizeEstimator,
    TruncatingModelGenerator,
    default_fixtures,
    mock_providers,
)
from .rate_limit import (
    Decision,
    RateLimitPolicy,
    SlidingWindowLimiter,
    acquire_rate_slot,
)

__all__ = [
    "Capability",
    "Decision",
    "FaultInjector",
    "FixtureSet",
    "HttpAdapterConfig",
    "HttpProviderBackend",
    "MockBehaviorGenerator",
    "MockImageGenerator",
    "MockModelGenerator",
    "MockPromptEnhancer",
    "MockSizeEstimator",
    "ProviderRequest",
    "ProviderResponse",
    "Providers",
    "RateLimitPolicy",
    "SlidingWindowLimiter",
    "TruncatingModelGenerator",
    "acquire_rate_slot",
    "default_fixtures",
    "mock_providers",
]
