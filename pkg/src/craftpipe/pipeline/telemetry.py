"""Event-log replay and aggregate reporting.

`replay_counters` reconstructs per-session phase and counters purely from
the log (the sourcing property); the aggregate renderers shape those into
the per-task completion-time/attempt-count summary and the per-stage
success-rate table the pipeline reports after experiment runs.
"""

from __future__ import annotations

import statistics

from .session import Phase

_PHASE_BY_EVENT = {
    "session_created": Phase.CREATED,
    "image_generated": Phase.IMAGE_READY,
    "model_generated": Phase.MODEL_READY,
    "behavior_attached": Phase.BEHAVIOR_ATTACHED,
    "uploaded": Phase.UPLOADED,
}

_COUNTER_BY_EVENT = {
    "image_generated": "image_attempts",
    "model_generated": "model_attempts",
    "behavior_attached": "behavior_attempts",
    "uploaded": "upload_attempts",
}

STAGES = ("image", "model", "behavior", "upload")


def replay_counters(events) -> dict:
    """Per-session phase/counters/timings derived only from the event log."""
    sessions: dict = {}
    for record in events:
        sid = record.get("session_id", "")
        kind = record.get("kind", "")
        if kind == "session_created":
            sessions[sid] = {
                "session_id": sid,
                "task_label": record.get("task_label", ""),
                "phase": Phase.CREATED.value,
                "image_attempts": 0,
                "model_attempts": 0,
                "behavior_attempts": 0,
                "upload_attempts": 0,
                "failures": {},
                "timings_ms": {},
                "created_ts": record["ts"],
                "uploaded_ts": None,
                "completion_s": None,
            }
            continue
        state = sessions.get(sid)
        if state is None:
            continue
        if kind == "stage_failed":
            stage = record.get("stage", "unknown")
            state["failures"][stage] = state["failures"].get(stage, 0) + 1
            continue
        if kind == "adjusted":
            if state["phase"] != Phase.BEHAVIOR_ATTACHED.value:
                state["phase"] = Phase.ADJUSTED.value
            continue
        if kind in _COUNTER_BY_EVENT:
            state[_COUNTER_BY_EVENT[kind]] += 1
            stage = kind.split("_")[0] if kind != "uploaded" else "upload"
            stage = {"image": "image", "model": "model",
                     "behavior": "behavior", "upload": "upload"}[stage]
            if "duration_ms" in record:
                state["timings_ms"][stage] = (
                    state["timings_ms"].get(stage, 0.0) + record["duration_ms"]
                )
        if kind in _PHASE_BY_EVENT:
            state["phase"] = _PHASE_BY_EVENT[kind].value
        if kind == "uploaded":
            state["uploaded_ts"] = record["ts"]
            state["completion_s"] = record["ts"] - state["created_ts"]
    return sessions


def _mean_sd(values) -> dict:
    values = list(values)
    if not values:
        return {"n": 0, "mean": None, "sd": None}
    mean = statistics.fmean(values)
    sd = statistics.stdev(values) if len(values) > 1 else 0.0
    return {"n": len(values), "mean": mean, "sd": sd}


def aggregate_report(events) -> dict:
    """Per-task summary: success rate, completion time, generation attempts.

    Completion times are reported raw; outlier policy is left to the analyst.
    """
    sessions = replay_counters(events)
    by_task: dict = {}
    for state in sessions.values():
        by_task.setdefault(state["task_label"] or "(none)", []).append(state)

    report = {}
    for task, states in sorted(by_task.items()):
        uploads = [s for s in states if s["phase"] == Phase.UPLOADED.value]
        report[task] = {
            "sessions": len(states),
            "task_success": len(uploads),
            "success_rate_pct": 100.0 * len(uploads) / len(states),
            "completion_time_s": _mean_sd(
                [s["completion_s"] for s in uploads if s["completion_s"] is not None]
            ),
            "image_generations": _mean_sd([s["image_attempts"] for s in states]),
            "model_generations": _mean_sd([s["model_attempts"] for s in states]),
        }
    return report


def render_report_text(report: dict) -> str:
    """Aligned text table: metric rows by task columns."""
    tasks = list(report)
    rows = [
        ("# of sessions", lambda r: str(r["sessions"])),
        ("# of task success", lambda r: str(r["task_success"])),
        ("% success rate", lambda r: f"{r['success_rate_pct']:.1f}"),
        ("completion time (s)", lambda r: _fmt_ms(r["completion_time_s"])),
        ("# of image generation", lambda r: _fmt_ms(r["image_generations"])),
        ("# of 3d generation", lambda r: _fmt_ms(r["model_generations"])),
    ]
    width = max((len(t) for t in tasks), default=8) + 4
    header = "metric".ljust(26) + "".join(t.ljust(width) for t in tasks)
    lines = [header, "-" * len(header)]
    for label, fmt in rows:
        lines.append(
            label.ljust(26) + "".join(fmt(report[t]).ljust(width) for t in tasks)
        )
    return "\n".join(lines) + "\n"


def _fmt_ms(entry: dict) -> str:
    if entry["mean"] is None:
        return "-"
    return f"{entry['mean']:.2f} ± {entry['sd']:.2f}"


def robustness_table(events) -> dict:
    """Per-task, per-stage success accounting (attempts = successes + failures)."""
    sessions = replay_counters(events)
    table: dict = {}
    for state in sessions.values():
        task = state["task_label"] or "(none)"
        entry = table.setdefault(
            task,
            {stage: {"successes": 0, "failures": 0} for stage in STAGES},
        )
        for stage, key in (
            ("image", "image_attempts"),
            ("model", "model_attempts"),
            ("behavior", "behavior_attempts"),
            ("upload", "upload_attempts"),
        ):
            entry[stage]["successes"] += state[key]
        for stage, count in state["failures"].items():
            if stage in entry:
                entry[stage]["failures"] += count
    for entry in table.values():
        for stage in STAGES:
            cell = entry[stage]
            attempts = cell["successes"] + cell["failures"]
            cell["attempts"] = attempts
            cell["success_rate_pct"] = (
                100.0 * cell["successes"] / attempts if attempts else None
            )
    return table


def render_robustness_text(table: dict) -> str:
    tasks = sorted(table)
    width = max((len(t) for t in tasks), default=8) + 4
    stage_labels = {
        "image": "Generate Image",
        "model": "Generate GLB",
        "behavior": "Generate Behavior",
        "upload": "Upload",
    }
    header = "action".ljust(20) + "".join(t.ljust(width) for t in tasks)
    lines = [header, "-" * len(header)]
    for stage in STAGES:
        cells = []
        for t in tasks:
            cell = table[t][stage]
            if cell["success_rate_pct"] is None:
                cells.append("-")
            else:
                cells.append(
                    f"{cell['success_rate_pct']:.2f} "
                    f"({cell['successes']}/{cell['attempts']})"
                )
        lines.append(stage_labels[stage].ljust(20) + "".join(c.ljust(width) for c in cells))
    return "\n".join(lines) + "\n"
