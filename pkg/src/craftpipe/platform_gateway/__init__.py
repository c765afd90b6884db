"""Platform upload gateway: HTTP client, adapter config, and mock server."""

from .client import (
    MAX_NAME_LENGTH,
    PlatformAdapter,
    PlatformGateway,
    UploadReceipt,
    cluster_like_adapter,
    cluster_like_templates,
)
from .mock_server import MockPlatformConfig, MockPlatformServer

__all__ = [
    "MAX_NAME_LENGTH",
    "MockPlatformConfig",
    "MockPlatformServer",
    "PlatformAdapter",
    "PlatformGateway",
    "UploadReceipt",
    "cluster_like_adapter",
    "cluster_like_templates",
]
