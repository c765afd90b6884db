"""Versioned text resources: prompt templates, script templates, task specs.

Prompt templates are stored as plain files so their wording stays
byte-auditable; code never inlines or rewrites them.
"""

from importlib import resources as _resources


def load_text(relpath: str) -> str:
    return (
        _resources.files("craftpipe") / "resources" / relpath
    ).read_text(encoding="utf-8")


def load_bytes(relpath: str) -> bytes:
    return (_resources.files("craftpipe") / "resources" / relpath).read_bytes()
