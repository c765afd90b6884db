"""Platform geometry limits: counting and checking.

Counts follow mesh data, not scene instances: a mesh referenced by two
nodes is counted once, matching how platforms meter uploaded assets.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

from ..asset_core.glb import GlbDocument, write_glb
from ..errors import UnsupportedPrimitiveMode

TRIANGLES_MODE = 4


@dataclass(frozen=True)
class PlatformProfile:
    """Upload limits of one target platform. Values are configurable defaults,
    not facts about any specific service."""

    name: str = "cluster-like"
    max_triangles: int = 20_000
    max_texture_edge_px: int = 2048
    max_file_bytes: int = 25 * 1024 * 1024

    def __post_init__(self):
        for attr in ("max_triangles", "max_texture_edge_px", "max_file_bytes"):
            if getattr(self, attr) <= 0:
                raise ValueError(f"{attr} must be positive")

    @classmethod
    def from_json_obj(cls, obj: dict) -> "PlatformProfile":
        return cls(
            name=obj.get("name", "cluster-like"),
            max_triangles=obj.get("max_triangles", 20_000),
            max_texture_edge_px=obj.get("max_texture_edge_px", 2048),
            max_file_bytes=obj.get("max_file_bytes", 25 * 1024 * 1024),
        )

    def to_json_obj(self) -> dict:
        return {
            "name": self.name,
            "max_triangles": self.max_triangles,
            "max_texture_edge_px": self.max_texture_edge_px,
            "max_file_bytes": self.max_file_bytes,
        }


@dataclass(frozen=True)
class BudgetReport:
    triangles: int
    vertices: int
    file_bytes: int
    violations: tuple = ()
    within_budget: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "within_budget", not self.violations)

    def to_json_obj(self) -> dict:
        return {
            "triangles": self.triangles,
            "vertices": self.vertices,
            "file_bytes": self.file_bytes,
            "within_budget": self.within_budget,
            "violations": list(self.violations),
        }


def iter_triangle_primitives(doc: GlbDocument):
    """Yield (mesh_index, primitive_index, primitive), rejecting non-triangle
    topology."""
    for mi, mesh in enumerate(doc.meshes):
        for pi, prim in enumerate(mesh.get("primitives", [])):
            mode = prim.get("mode", TRIANGLES_MODE)
            if mode != TRIANGLES_MODE:
                raise UnsupportedPrimitiveMode(
                    f"meshes[{mi}].primitives[{pi}] has mode {mode}; only "
                    f"triangles (4) are supported"
                )
            yield mi, pi, prim


def primitive_triangle_count(doc: GlbDocument, prim: dict) -> int:
    if "indices" in prim:
        count = doc.accessors[prim["indices"]].get("count", 0)
    else:
        pos = prim.get("attributes", {}).get("POSITION")
        count = doc.accessors[pos].get("count", 0) if pos is not None else 0
    if count % 3 != 0:
        raise UnsupportedPrimitiveMode(
            f"vertex/index count {count} is not a multiple of 3"
        )
    return count // 3


def measure(doc: GlbDocument):
    """(triangles, vertices) summed over mesh data."""
    triangles = 0
    vertices = 0
    for _mi, _pi, prim in iter_triangle_primitives(doc):
        triangles += primitive_triangle_count(doc, prim)
        pos = prim.get("attributes", {}).get("POSITION")
        if pos is not None:
            vertices += doc.accessors[pos].get("count", 0)
    return triangles, vertices


def _png_dimensions(data: bytes):
    if len(data) >= 24 and data[:8] == b"\x89PNG\r\n\x1a\n":
        w, h = struct.unpack_from(">II", data, 16)
        return w, h
    return None


def max_texture_edge(doc: GlbDocument) -> int:
    """Largest PNG edge among embedded images; 0 when none are decodable."""
    edge = 0
    for image in doc.json_tree.get("images", []):
        view_idx = image.get("bufferView")
        if view_idx is None:
            continue
        view = doc.buffer_views[view_idx]
        start = view.get("byteOffset", 0)
        dims = _png_dimensions(doc.binary[start : start + view.get("byteLength", 0)])
        if dims:
            edge = max(edge, dims[0], dims[1])
    return edge


def check(doc: GlbDocument, profile: PlatformProfile) -> BudgetReport:
    """Deterministic report listing each violated limit (limits inclusive)."""
    triangles, vertices = measure(doc)
    file_bytes = len(write_glb(doc))
    violations = []
    if triangles > profile.max_triangles:
        violations.append("triangles")
    if max_texture_edge(doc) > profile.max_texture_edge_px:
        violations.append("texture_edge")
    if file_bytes > profile.max_file_bytes:
        violations.append("file_bytes")
    return BudgetReport(triangles, vertices, file_bytes, tuple(violations))
