"""HTTP service, CLI, and configuration."""

from .app import create_app
from .config import ApiConfig, ServiceStack, load_config
from .runner import run_task_spec

__all__ = ["ApiConfig", "ServiceStack", "create_app", "load_config", "run_task_spec"]
