"""Value types shared across the asset pipeline.

All types are immutable; operations elsewhere return new values instead of
mutating, so documents and bundles can be shared across concurrent sessions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvariantViolation
from ..mathutil import IDENTITY_QUAT, quat_norm, quat_normalize, trs_matrix


def _require_finite(name, *values):
    for v in values:
        if not math.isfinite(v):
            raise InvariantViolation(f"{name} component not finite: {v!r}")


@dataclass(frozen=True)
class Vec3:
    """A point or direction in meters. Components must be finite."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        _require_finite("Vec3", self.x, self.y, self.z)

    @classmethod
    def zero(cls) -> "Vec3":
        return cls(0.0, 0.0, 0.0)

    @classmethod
    def ones(cls) -> "Vec3":
        return cls(1.0, 1.0, 1.0)

    @classmethod
    def from_seq(cls, seq) -> "Vec3":
        x, y, z = seq
        return cls(float(x), float(y), float(z))

    def as_tuple(self):
        return (self.x, self.y, self.z)

    def as_list(self):
        return [self.x, self.y, self.z]

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)


@dataclass(frozen=True)
class Rotation:
    """Unit quaternion in glTF (x, y, z, w) order; norm within 1e-6 of 1."""

    x: float = 0.0
    y: float = 0.0
    z: float = 0.0
    w: float = 1.0

    def __post_init__(self):
        _require_finite("Rotation", self.x, self.y, self.z, self.w)
        n = quat_norm(self.as_tuple())
        if abs(n - 1.0) > 1e-6:
            raise InvariantViolation(f"quaternion norm {n} not within 1e-6 of 1")

    @classmethod
    def identity(cls) -> "Rotation":
        return cls(*IDENTITY_QUAT)

    @classmethod
    def from_seq(cls, seq) -> "Rotation":
        x, y, z, w = seq
        return cls(float(x), float(y), float(z), float(w))

    @classmethod
    def from_quat(cls, q) -> "Rotation":
        """Build from an arbitrary non-zero quaternion, renormalizing exactly."""
        return cls(*quat_normalize(q))

    def as_tuple(self):
        return (self.x, self.y, self.z, self.w)

    def as_list(self):
        return [self.x, self.y, self.z, self.w]


@dataclass(frozen=True)
class Transform:
    """TRS transform; composes as a 4x4 affine map. Scale must be positive."""

    translation: Vec3 = field(default_factory=Vec3.zero)
    rotation: Rotation = field(default_factory=Rotation.identity)
    scale: Vec3 = field(default_factory=Vec3.ones)

    def __post_init__(self):
        if min(self.scale.as_tuple()) <= 0.0:
            raise InvariantViolation(f"scale components must be > 0: {self.scale}")

    @classmethod
    def identity(cls) -> "Transform":
        return cls()

    @classmethod
    def uniform_scale(cls, s: float) -> "Transform":
        return cls(scale=Vec3(s, s, s))

    def matrix(self) -> np.ndarray:
        return trs_matrix(
            self.translation.as_tuple(), self.rotation.as_tuple(), self.scale.as_tuple()
        )


@dataclass(frozen=True)
class Aabb:
    """Axis-aligned bounding box; min <= max componentwise.

    Empty geometry is represented by the absence of a box (None), never by a
    degenerate instance.
    """

    min: Vec3
    max: Vec3

    def __post_init__(self):
        if (
            self.min.x > self.max.x
            or self.min.y > self.max.y
            or self.min.z > self.max.z
        ):
            raise InvariantViolation(f"Aabb min {self.min} exceeds max {self.max}")

    def center(self) -> Vec3:
        return Vec3(
            (self.min.x + self.max.x) / 2.0,
            (self.min.y + self.max.y) / 2.0,
            (self.min.z + self.max.z) / 2.0,
        )

    def size(self) -> Vec3:
        return Vec3(
            self.max.x - self.min.x,
            self.max.y - self.min.y,
            self.max.z - self.min.z,
        )

    def contains(self, point: Vec3, slack: float = 0.0) -> bool:
        return (
            self.min.x - slack <= point.x <= self.max.x + slack
            and self.min.y - slack <= point.y <= self.max.y + slack
            and self.min.z - slack <= point.z <= self.max.z + slack
        )

    def inflated(self, amount: float) -> "Aabb":
        return Aabb(
            Vec3(self.min.x - amount, self.min.y - amount, self.min.z - amount),
            Vec3(self.max.x + amount, self.max.y + amount, self.max.z + amount),
        )
