"""Session pipeline: state machine, storage, telemetry, replay."""

from .session import (
    Phase,
    PipelineEngine,
    Session,
    STAGE_BEHAVIOR,
    STAGE_IMAGE,
    STAGE_MODEL,
    STAGE_UPLOAD,
    UNSET,
)
from .storage import BlobStore, EventLog, digest_of, digest_of_text
from .restore import restore_sessions
from .telemetry import (
    aggregate_report,
    render_report_text,
    render_robustness_text,
    replay_counters,
    robustness_table,
)
from .views import session_view, telemetry_view

__all__ = [
    "BlobStore",
    "EventLog",
    "Phase",
    "PipelineEngine",
    "STAGE_BEHAVIOR",
    "STAGE_IMAGE",
    "STAGE_MODEL",
    "STAGE_UPLOAD",
    "Session",
    "UNSET",
    "aggregate_report",
    "digest_of",
    "digest_of_text",
    "render_report_text",
    "render_robustness_text",
    "replay_counters",
    "restore_sessions",
    "robustness_table",
    "session_view",
    "telemetry_view",
]
