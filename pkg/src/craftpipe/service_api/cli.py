"""Command-line interface: serve the HTTP API, run task specs, aggregate logs."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from ..pipeline import (
    EventLog,
    aggregate_report,
    render_report_text,
    render_robustness_text,
    robustness_table,
)
from .config import ServiceStack, load_config
from .runner import run_task_spec


@click.group()
def main():
    """craftpipe: prompt-to-3D object pipeline."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="JSON config file (env CRAFTPIPE_* overrides apply).")
def serve(config_path):
    """Serve the HTTP API."""
    import uvicorn

    from .app import create_app

    config = load_config(config_path)
    stack = ServiceStack(config)
    app = create_app(stack.engine)
    try:
        uvicorn.run(app, host=config.listen_host, port=config.listen_port)
    finally:
        stack.close()


@main.command()
@click.option("--spec", "spec_path", type=click.Path(exists=True), required=True,
              help="Task spec JSON (see resources/taskspecs for bundled ones).")
@click.option("--out", "out_dir", type=click.Path(), required=True,
              help="Directory for the final GLB and telemetry report.")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
def run(spec_path, out_dir, config_path):
    """Execute one task spec non-interactively; exit 0 iff Uploaded."""
    config = load_config(config_path)
    stack = ServiceStack(config)
    try:
        code = run_task_spec(spec_path, out_dir, stack.engine)
    finally:
        stack.close()
    sys.exit(code)


@main.command()
@click.option("--logs", "log_dir", type=click.Path(exists=True), required=True,
              help="Event log directory (events-*.jsonl files).")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
def aggregate(log_dir, fmt):
    """Summarize completed sessions: success rates, times, attempt counts."""
    events = EventLog(Path(log_dir)).read_all()
    report = aggregate_report(events)
    robustness = robustness_table(events)
    if fmt == "json":
        click.echo(json.dumps({"summary": report, "robustness": robustness}, indent=2))
    else:
        click.echo(render_report_text(report))
        click.echo(render_robustness_text(robustness))


if __name__ == "__main__":
    main()
