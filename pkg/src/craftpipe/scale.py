"""Real-world scaling: size-reply parsing, scale factors, and application.

Image-to-3D providers normalize output to roughly unit extent, so a model's
raw span rarely matches reality. The pipeline estimates the real longest
dimension from the source image, then scales by the ratio of that estimate
to the model's computational length (its largest bounding-box span).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .asset_core.bounds import compute_world_aabb, longest_span
from .asset_core.glb import GlbDocument
from .asset_core.transform import apply_root_transform
from .asset_core.types import Transform
from .errors import DegenerateGeometry

MAX_LENGTH_M = 1000.0  # sanity cap; absurd estimates fall back instead
FALLBACK_LENGTH_M = 1.0  # providers normalize to ~unit size, so 1 m is neutral
MIN_COMPUTATIONAL_LENGTH_M = 1e-9


class ParseConfidence(str, Enum):
    EXACT = "exact"  # reply was already in meters
    UNIT_CONVERTED = "unit_converted"  # recognized non-meter unit
    FALLBACK = "fallback"  # nothing parsable; neutral default


@dataclass(frozen=True)
class SizeEstimate:
    length_m: float
    raw_reply: str
    parse_confidence: ParseConfidence

    def __post_init__(self):
        if not 0.0 < self.length_m <= MAX_LENGTH_M:
            raise ValueError(f"length_m {self.length_m} outside (0, {MAX_LENGTH_M}]")


@dataclass(frozen=True)
class ScaleFactor:
    value: float

    def __post_init__(self):
        if not self.value > 0.0:
            raise ValueError(f"scale factor must be positive, got {self.value}")


_TO_METERS = {
    "mm": 0.001, "millimeter": 0.001, "millimeters": 0.001, "millimetre": 0.001,
    "millimetres": 0.001,
    "cm": 0.01, "centimeter": 0.01, "centimeters": 0.01, "centimetre": 0.01,
    "centimetres": 0.01,
    "m": 1.0, "meter": 1.0, "meters": 1.0, "metre": 1.0, "metres": 1.0,
    "km": 1000.0, "kilometer": 1000.0, "kilometers": 1000.0, "kilometre": 1000.0,
    "kilometres": 1000.0,
    "in": 0.0254, "inch": 0.0254, "inches": 0.0254,
    "ft": 0.3048, "foot": 0.3048, "feet": 0.3048,
}

_NUM = r"\d+(?:[.,]\d+)?"
_QUANTITY_RE = re.compile(
    rf"({_NUM})(?:\s*(?:-|–|—|to)\s*({_NUM}))?\s*([a-zA-Z]+)"
)


def _to_float(text: str) -> float:
    return float(text.replace(",", "."))


def parse_size_reply(raw: str) -> SizeEstimate:
    """Extract the first usable length from a free-text size reply.

    Takes the first numeric quantity with a recognized unit (mm, cm, m, km,
    in, ft); ranges like "1-2 m" use the midpoint. Unparsable or absurd
    (outside (0, 1000] m) replies fall back to 1.0 m so a bad estimate never
    aborts the pipeline.
    """
    for match in _QUANTITY_RE.finditer(raw or ""):
        unit = match.group(3).lower()
        factor = _TO_METERS.get(unit)
        if factor is None:
            continue
        value = _to_float(match.group(1))
        if match.group(2) is not None:
            value = (value + _to_float(match.group(2))) / 2.0
        meters = value * factor
        if not 0.0 < meters <= MAX_LENGTH_M:
            continue
        confidence = (
            ParseConfidence.EXACT if factor == 1.0 else ParseConfidence.UNIT_CONVERTED
        )
        return SizeEstimate(meters, raw, confidence)
    return SizeEstimate(FALLBACK_LENGTH_M, raw or "", ParseConfidence.FALLBACK)


def compute_scale_factor(
    estimate: SizeEstimate, computational_length: float
) -> ScaleFactor:
    """Ratio of the estimated real-world length to the model's span."""
    if computational_length <= MIN_COMPUTATIONAL_LENGTH_M:
        raise DegenerateGeometry(
            f"computational length {computational_length} too small to scale"
        )
    return ScaleFactor(estimate.length_m / computational_length)


def apply_estimated_scale(doc: GlbDocument, estimate: SizeEstimate):
    """Scale the document so its longest span equals the estimate.

    Returns (scaled document, factor). The scale is applied structurally via
    a root wrapper node, so it remains reversible. Raises DegenerateGeometry
    for empty or flat models.
    """
    aabb = compute_world_aabb(doc)
    if aabb is None:
        raise DegenerateGeometry("document has no vertices")
    factor = compute_scale_factor(estimate, longest_span(aabb))
    scaled = apply_root_transform(doc, Transform.uniform_scale(factor.value))
    return scaled, factor
