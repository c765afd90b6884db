"""Quaternion and affine-transform helpers.

Quaternions are (x, y, z, w) tuples, matching the glTF component order.
Matrices are 4x4 numpy arrays in row-major math convention; glTF stores
them column-major, so conversion helpers flatten/unflatten accordingly.
"""

from __future__ import annotations

import math

import numpy as np

IDENTITY_QUAT = (0.0, 0.0, 0.0, 1.0)


def quat_norm(q) -> float:
    x, y, z, w = q
    return math.sqrt(x * x + y * y + z * z + w * w)


def quat_normalize(q):
    n = quat_norm(q)
    if n == 0.0 or not math.isfinite(n):
        raise ValueError(f"cannot normalize quaternion {q!r}")
    x, y, z, w = q
    return (x / n, y / n, z / n, w / n)


def quat_mul(a, b):
    """Hamilton product a*b: the rotation that applies b first, then a."""
    ax, ay, az, aw = a
    bx, by, bz, bw = b
    return (
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
        aw * bw - ax * bx - ay * by - az * bz,
    )


def quat_conjugate(q):
    x, y, z, w = q
    return (-x, -y, -z, w)


def quat_from_axis_angle(axis, angle_rad: float):
    ax, ay, az = axis
    n = math.sqrt(ax * ax + ay * ay + az * az)
    if n == 0.0:
        raise ValueError("zero axis")
    s = math.sin(angle_rad / 2.0) / n
    return (ax * s, ay * s, az * s, math.cos(angle_rad / 2.0))


def quat_to_matrix3(q) -> np.ndarray:
    x, y, z, w = quat_normalize(q)
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
            [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
            [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
        ],
        dtype=np.float64,
    )


def rotations_equivalent(a, b, tol: float = 1e-6) -> bool:
    """True when two unit quaternions encode the same rotation (double cover)."""
    d = abs(sum(ai * bi for ai, bi in zip(a, b)))
    return abs(d - 1.0) <= tol


def trs_matrix(translation, rotation, scale) -> np.ndarray:
    """Compose T * R * S into a 4x4 affine matrix."""
    m = np.eye(4, dtype=np.float64)
    rs = quat_to_matrix3(rotation) * np.asarray(scale, dtype=np.float64)[None, :]
    m[:3, :3] = rs
    m[:3, 3] = translation
    return m


def matrix_from_gltf(values) -> np.ndarray:
    """glTF column-major 16-float list -> 4x4 row-major matrix."""
    return np.array(values, dtype=np.float64).reshape(4, 4).T


def matrix_to_gltf(m: np.ndarray) -> list:
    return [float(v) for v in np.asarray(m, dtype=np.float64).T.reshape(16)]


def transform_points(m: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Apply a 4x4 affine matrix to an (n, 3) float array."""
    pts = np.asarray(points, dtype=np.float64)
    return pts @ m[:3, :3].T + m[:3, 3]
