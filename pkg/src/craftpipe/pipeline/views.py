"""JSON-safe views of pipeline state (and their inverses for replay).

All numbers are emitted at full float precision; rounding happens only at
render time in clients. Secrets never appear in any view.
"""

from __future__ import annotations

import json

from ..asset_core.types import Rotation, Transform, Vec3
from ..interaction import InteractionPoint, PointKind


def transform_view(t: Transform) -> dict:
    return {
        "translation": t.translation.as_list(),
        "rotation": t.rotation.as_list(),
        "scale": t.scale.as_list(),
    }


def transform_from_view(obj: dict) -> Transform:
    return Transform(
        translation=Vec3.from_seq(obj.get("translation", [0, 0, 0])),
        rotation=Rotation.from_seq(obj.get("rotation", [0, 0, 0, 1])),
        scale=Vec3.from_seq(obj.get("scale", [1, 1, 1])),
    )


def point_view(p) -> dict | None:
    if p is None:
        return None
    return {
        "position": p.position.as_list(),
        "rotation": p.orientation.as_list(),
    }


def point_from_view(obj: dict, kind: PointKind) -> InteractionPoint:
    return InteractionPoint(
        kind,
        Vec3.from_seq(obj["position"]),
        Rotation.from_seq(obj["rotation"]),
    )


def bundle_view(bundle) -> dict | None:
    if bundle is None:
        return None
    sit = bundle.point(PointKind.SIT)
    grip = bundle.point(PointKind.GRIP)
    return {
        "transform": transform_view(bundle.root_transform),
        "sit": point_view(sit),
        "grip": point_view(grip),
        "behavior": None if bundle.behavior is None else bundle.behavior.to_json_obj(),
        "metadata": bundle.metadata.to_json_obj(),
    }


def telemetry_view(session) -> dict:
    return {
        "session_id": session.id,
        "task_label": session.task_label,
        "phase": session.phase.value,
        "timings_ms": dict(session.timings_ms),
        "counters": dict(session.counters),
        "failures": dict(session.failures),
        "created_ts": session.created_ts,
        "uploaded_ts": session.uploaded_ts,
        "completion_s": (
            session.uploaded_ts - session.created_ts if session.uploaded_ts else None
        ),
    }


def session_view(session) -> dict:
    return {
        "id": session.id,
        "phase": session.phase.value,
        "task_label": session.task_label,
        "token_digest": session.token_digest,
        "prompt_history": [
            {"user_text": user, "enhanced": enhanced}
            for user, enhanced in session.prompt_history
        ],
        "image_digests": list(session.image_digests),
        "model_digests": list(session.model_digests),
        "bundle": bundle_view(session.bundle),
        "trajectory_digest": session.trajectory_digest,
        "item_id": session.item_id,
        "item_url": session.item_url,
        "telemetry": telemetry_view(session),
    }


def trajectory_json(trajectory) -> bytes:
    return json.dumps({"samples": trajectory.to_json_obj()}).encode("utf-8")
