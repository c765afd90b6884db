"""Sit/grip interaction points and their GLB vendor extension.

The extension schema is part of the on-disk contract:

    "VENDOR_interaction_points": {
        "sit":  {"position": [x, y, z], "rotation": [x, y, z, w]},
        "grip": {"position": [x, y, z], "rotation": [x, y, z, w]}
    }

Both entries are optional; numbers are serialized at full float precision
(Python repr round-trip), so encode/decode is bit-exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .asset_core.types import Aabb, Rotation, Vec3
from .errors import DuplicateKind, MalformedExtension
from .mathutil import quat_mul, quat_normalize

EXTENSION_NAME = "VENDOR_interaction_points"

# Avatar faces +Z at identity; a 180-degree yaw turns a seated avatar to -Z.
FACING_NEG_Z = Rotation(0.0, 1.0, 0.0, 0.0)


class PointKind(str, Enum):
    SIT = "sit"
    GRIP = "grip"


@dataclass(frozen=True)
class InteractionPoint:
    """Object-local anchor where an avatar sits on or holds the object."""

    kind: PointKind
    position: Vec3
    orientation: Rotation


@dataclass(frozen=True)
class MannequinRef:
    """Fixed humanoid reference used by the UI for visual size alignment.

    seated_hip_height_m (0.45 x height) only drives mannequin display; core
    placement logic never reads it.
    """

    height_m: float = 1.70

    @property
    def seated_hip_height_m(self) -> float:
        return 0.45 * self.height_m


def default_sit_point(aabb: Aabb) -> InteractionPoint:
    """Sit anchor on the top face center, facing the -Z object axis."""
    center = aabb.center()
    return InteractionPoint(
        PointKind.SIT,
        Vec3(center.x, aabb.max.y, center.z),
        FACING_NEG_Z,
    )


def default_grip_point(aabb: Aabb) -> InteractionPoint:
    """Grip anchor at the exact box centroid with identity orientation."""
    return InteractionPoint(PointKind.GRIP, aabb.center(), Rotation.identity())


def adjust_point(
    point: InteractionPoint, delta_position: Vec3, delta_rotation: Rotation
) -> InteractionPoint:
    """Compose deltas onto a point; the orientation is renormalized to unit."""
    rotated = quat_normalize(
        quat_mul(delta_rotation.as_tuple(), point.orientation.as_tuple())
    )
    return InteractionPoint(
        point.kind, point.position + delta_position, Rotation(*rotated)
    )


def encode_interaction_extension(points) -> dict | None:
    """Extension object for a point list, or None when there are no points."""
    ext: dict = {}
    for point in points:
        key = point.kind.value
        if key in ext:
            raise DuplicateKind(f"more than one {key} point")
        ext[key] = {
            "position": point.position.as_list(),
            "rotation": point.orientation.as_list(),
        }
    return ext or None


def _decode_entry(kind: PointKind, entry) -> InteractionPoint:
    if not isinstance(entry, dict):
        raise MalformedExtension(f"{kind.value} entry must be an object")
    for name, width in (("position", 3), ("rotation", 4)):
        value = entry.get(name)
        if (
            not isinstance(value, list)
            or len(value) != width
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
        ):
            raise MalformedExtension(f"{kind.value}.{name} must be {width} numbers")
    return InteractionPoint(
        kind,
        Vec3.from_seq(entry["position"]),
        Rotation.from_seq(entry["rotation"]),
    )


def decode_interaction_extension(ext: dict) -> list:
    """Inverse of encode; sit before grip. Raises MalformedExtension."""
    if not isinstance(ext, dict):
        raise MalformedExtension("extension must be an object")
    unknown = set(ext) - {k.value for k in PointKind}
    if unknown:
        raise MalformedExtension(f"unknown keys {sorted(unknown)}")
    points = []
    for kind in (PointKind.SIT, PointKind.GRIP):
        if kind.value in ext:
            points.append(_decode_entry(kind, ext[kind.value]))
    return points
