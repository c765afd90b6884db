"""Full session-state reconstruction from the event log plus blob store.

The service is stateless across restarts: replaying the log restores every
session's working state (model document, adjustments, behavior, counters).
The platform token is the one exception; only its digest was ever logged,
so a restored session must be re-authenticated before it can upload.
"""

from __future__ import annotations

import json

from ..asset_core.assemble import AssemblyBundle, AssetMetadata
from ..asset_core.bounds import compute_world_aabb
from ..asset_core.glb import parse_glb
from ..asset_core.types import Transform
from ..behavior import validate_descriptor
from ..interaction import PointKind, default_grip_point, default_sit_point
from .session import Phase, Session
from . import views


def restore_sessions(blob_store, events) -> dict:
    sessions: dict = {}
    for record in events:
        sid = record.get("session_id", "")
        kind = record.get("kind", "")
        if kind == "session_created":
            sessions[sid] = Session(
                id=sid,
                token_digest=record.get("token_digest", ""),
                platform_token="",  # secrets are never logged; re-auth needed
                task_label=record.get("task_label", ""),
                created_ts=record["ts"],
            )
            continue
        session = sessions.get(sid)
        if session is None:
            continue
        if kind == "image_generated":
            session.prompt_history.append(
                (record.get("user_text", ""), record.get("enhanced", ""))
            )
            session.image_digests.append(record["image_digest"])
            session.counters["image_attempts"] += 1
            session.timings_ms["image"] = (
                session.timings_ms.get("image", 0.0) + record.get("duration_ms", 0.0)
            )
            session.phase = Phase.IMAGE_READY
        elif kind == "model_generated":
            model_doc = parse_glb(blob_store.get(record["model_digest"]))
            aabb = compute_world_aabb(model_doc)
            session.bundle = AssemblyBundle(
                model=model_doc,
                root_transform=Transform.identity(),
                interaction_points=(
                    default_sit_point(aabb),
                    default_grip_point(aabb),
                ),
                behavior=None,
                metadata=AssetMetadata(
                    creator="craftpipe",
                    source_image_digest=record["image_digest"],
                ),
            )
            session.model_digests.append(record["model_digest"])
            session.counters["model_attempts"] += 1
            session.timings_ms["model"] = (
                session.timings_ms.get("model", 0.0) + record.get("duration_ms", 0.0)
            )
            session.trajectory_digest = ""
            session.phase = Phase.MODEL_READY
        elif kind == "adjusted":
            bundle = session.bundle
            transform = bundle.root_transform
            points = {p.kind: p for p in bundle.interaction_points}
            if "transform" in record:
                transform = views.transform_from_view(record["transform"])
            for key, point_kind in (("sit", PointKind.SIT), ("grip", PointKind.GRIP)):
                if key in record:
                    if record[key] is None:
                        points.pop(point_kind, None)
                    else:
                        points[point_kind] = views.point_from_view(
                            record[key], point_kind
                        )
            session.bundle = AssemblyBundle(
                model=bundle.model,
                root_transform=transform,
                interaction_points=tuple(
                    points[k] for k in (PointKind.SIT, PointKind.GRIP) if k in points
                ),
                behavior=bundle.behavior,
                metadata=bundle.metadata,
            )
            if session.phase != Phase.BEHAVIOR_ATTACHED:
                session.phase = Phase.ADJUSTED
        elif kind == "behavior_attached":
            descriptor = validate_descriptor(json.dumps(record["descriptor"]))
            bundle = session.bundle
            session.bundle = AssemblyBundle(
                model=bundle.model,
                root_transform=bundle.root_transform,
                interaction_points=bundle.interaction_points,
                behavior=descriptor,
                metadata=bundle.metadata,
            )
            session.trajectory_digest = record.get("trajectory_digest", "")
            session.counters["behavior_attempts"] += 1
            session.timings_ms["behavior"] = (
                session.timings_ms.get("behavior", 0.0)
                + record.get("duration_ms", 0.0)
            )
            session.phase = Phase.BEHAVIOR_ATTACHED
        elif kind == "uploaded":
            bundle = session.bundle
            session.bundle = AssemblyBundle(
                model=bundle.model,
                root_transform=bundle.root_transform,
                interaction_points=bundle.interaction_points,
                behavior=bundle.behavior,
                metadata=AssetMetadata(
                    name=record.get("name", ""),
                    creator=bundle.metadata.creator,
                    source_image_digest=bundle.metadata.source_image_digest,
                ),
            )
            session.counters["upload_attempts"] += 1
            session.timings_ms["upload"] = (
                session.timings_ms.get("upload", 0.0) + record.get("duration_ms", 0.0)
            )
            session.uploaded_ts = record["ts"]
            session.item_id = record.get("item_id", "")
            session.item_url = record.get("item_url", "")
            session.phase = Phase.UPLOADED
        elif kind == "stage_failed":
            stage = record.get("stage", "unknown")
            session.failures[stage] = session.failures.get(stage, 0) + 1
    return sessions
