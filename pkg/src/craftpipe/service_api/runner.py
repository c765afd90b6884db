"""Headless task execution: run one scripted session against the stack.

A task spec is a JSON file:

    {
      "task": "task1_chair",
      "prompt": "a simple wooden chair",
      "platform_token": "test-token",
      "extra_image_runs": 0,
      "extra_model_runs": 0,
      "adjustments": {
        "transform": {"translation": [...], "rotation": [...], "scale": [...]},
        "scale": 2.0,                      # uniform shortcut
        "sit_offset": [0.0, 0.1, 0.0],     # delta on the default sit point
        "grip_offset": [0.0, -0.05, 0.0]
      },
      "behavior": true,
      "upload_name": "Generated Chair"
    }

Exit code 0 means the session reached Uploaded; failures write a
machine-readable reason and return 1.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..asset_core.types import Rotation, Transform, Vec3
from ..errors import CraftError
from ..interaction import PointKind, adjust_point
from ..pipeline import Phase, session_view, telemetry_view


def _transform_from_spec(adjustments: dict):
    if "transform" in adjustments:
        obj = adjustments["transform"]
        return Transform(
            translation=Vec3.from_seq(obj.get("translation", [0, 0, 0])),
            rotation=Rotation.from_seq(obj.get("rotation", [0, 0, 0, 1])),
            scale=Vec3.from_seq(obj.get("scale", [1, 1, 1])),
        )
    if "scale" in adjustments:
        return Transform.uniform_scale(float(adjustments["scale"]))
    return None


def run_task_spec(spec_path, out_dir, engine) -> int:
    spec_path = Path(spec_path)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    spec = json.loads(spec_path.read_text(encoding="utf-8"))

    task = spec.get("task", spec_path.stem)
    try:
        session = engine.create_session(
            spec.get("platform_token", "test-token"), task_label=task
        )
        sid = session.id

        for _ in range(1 + int(spec.get("extra_image_runs", 0))):
            session = engine.run_image_phase(sid, spec["prompt"])
        for _ in range(1 + int(spec.get("extra_model_runs", 0))):
            session = engine.run_model_phase(sid)

        adjustments = spec.get("adjustments", {})
        transform = _transform_from_spec(adjustments)
        if transform is not None:
            session = engine.apply_adjustment(sid, root_transform=transform)
        if "sit_offset" in adjustments:
            sit = session.bundle.point(PointKind.SIT)
            moved = adjust_point(
                sit, Vec3.from_seq(adjustments["sit_offset"]), Rotation.identity()
            )
            session = engine.apply_adjustment(sid, sit=moved)
        if "grip_offset" in adjustments:
            grip = session.bundle.point(PointKind.GRIP)
            moved = adjust_point(
                grip, Vec3.from_seq(adjustments["grip_offset"]), Rotation.identity()
            )
            session = engine.apply_adjustment(sid, grip=moved)

        if spec.get("behavior", False):
            session = engine.run_behavior_phase(sid)

        session = engine.run_upload_phase(sid, spec.get("upload_name", task))
    except CraftError as exc:
        failure = {"error": type(exc).__name__, "detail": str(exc), "task": task}
        (out_dir / "failure.json").write_text(
            json.dumps(failure, indent=2), encoding="utf-8"
        )
        print(json.dumps(failure))
        return 1

    (out_dir / "assembled.glb").write_bytes(engine.preview_glb(sid))
    (out_dir / "session.json").write_text(
        json.dumps(session_view(session), indent=2), encoding="utf-8"
    )
    (out_dir / "telemetry.json").write_text(
        json.dumps(telemetry_view(session), indent=2), encoding="utf-8"
    )
    print(
        json.dumps(
            {
                "task": task,
                "session_id": sid,
                "phase": session.phase.value,
                "item_url": session.item_url,
            }
        )
    )
    return 0 if session.phase == Phase.UPLOADED else 1
