"""Rendering of the versioned prompt templates into provider requests."""

from __future__ import annotations

import json
from string import Template

from ..resources import load_text

DESCRIPTOR_SCHEMA_EXAMPLE = {
    "version": 1,
    "duration_s": "loop",
    "primitives": [
        {"translate": {"velocity": [0.0, 0.0, 0.5]}},
        {"rotate": {"axis": [0.0, 1.0, 0.0], "deg_per_s": 45.0}},
        {"oscillate": {"axis": [0.0, 1.0, 0.0], "amplitude_m": 0.2, "period_s": 3.0}},
        {
            "orbit": {
                "center": [0.0, 1.0, 0.0],
                "axis": [0.0, 1.0, 0.0],
                "radius_m": 1.0,
                "deg_per_s": 30.0,
            }
        },
    ],
}


def enhance_request_text(user_text: str) -> str:
    """The image-prompt-enhancement instruction with the user's subject."""
    template = load_text("prompts/enhance_prompt.txt")
    return f"{template}\n# Subject\n{user_text}\n"


def size_request_text() -> str:
    """The size-estimation instruction sent alongside the object image."""
    return load_text("prompts/estimate_size.txt")


def behavior_request_text(description: str) -> str:
    """The behavior-generation instruction embedding the descriptor schema."""
    template = Template(load_text("prompts/generate_behavior.txt"))
    return template.substitute(
        schema=json.dumps(DESCRIPTOR_SCHEMA_EXAMPLE, indent=2),
        description=description,
    )
