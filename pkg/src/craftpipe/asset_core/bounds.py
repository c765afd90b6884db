"""World-space bounds of the default scene.

The box is taken over every POSITION attribute of every mesh instance after
applying the full node-hierarchy transform chain, so instanced meshes
contribute once per instance.
"""

from __future__ import annotations

import numpy as np

from ..mathutil import matrix_from_gltf, transform_points, trs_matrix
from .accessors import is_float_vec, read_accessor
from .glb import GlbDocument
from .types import Aabb, Vec3


def node_local_matrix(node: dict) -> np.ndarray:
    if "matrix" in node:
        return matrix_from_gltf(node["matrix"])
    return trs_matrix(
        node.get("translation", [0.0, 0.0, 0.0]),
        node.get("rotation", [0.0, 0.0, 0.0, 1.0]),
        node.get("scale", [1.0, 1.0, 1.0]),
    )


def iter_mesh_instances(doc: GlbDocument):
    """Yield (node_index, world_matrix, mesh_dict) for the default scene."""
    nodes = doc.nodes
    stack = [
        (idx, np.eye(4, dtype=np.float64))
        for idx in reversed(doc.default_scene.get("nodes", []))
    ]
    while stack:
        idx, parent = stack.pop()
        node = nodes[idx]
        world = parent @ node_local_matrix(node)
        if "mesh" in node:
            yield idx, world, doc.meshes[node["mesh"]]
        for child in reversed(node.get("children", [])):
            stack.append((child, world))


def compute_world_aabb(doc: GlbDocument) -> Aabb | None:
    """Bounds of all float32 VEC3 POSITION data; None when there are no vertices."""
    lo = np.full(3, np.inf)
    hi = np.full(3, -np.inf)
    seen = False
    for _idx, world, mesh in iter_mesh_instances(doc):
        for prim in mesh.get("primitives", []):
            pos_idx = prim.get("attributes", {}).get("POSITION")
            if pos_idx is None or not is_float_vec(doc, pos_idx, 3):
                continue
            positions = read_accessor(doc, pos_idx)
            if positions.shape[0] == 0:
                continue
            world_pts = transform_points(world, positions)
            lo = np.minimum(lo, world_pts.min(axis=0))
            hi = np.maximum(hi, world_pts.max(axis=0))
            seen = True
    if not seen:
        return None
    return Aabb(Vec3(*(float(v) for v in lo)), Vec3(*(float(v) for v in hi)))


def longest_span(aabb: Aabb) -> float:
    """Largest extent across the three axes, in meters."""
    size = aabb.size()
    return max(size.x, size.y, size.z)
