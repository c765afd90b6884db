"""Construct GLB documents from raw mesh arrays, plus procedural test shapes
and buffer compaction for rewritten documents."""

from __future__ import annotations

import copy
import math

import numpy as np

from .glb import GlbDocument

FLOAT = 5126
UNSIGNED_SHORT = 5123
UNSIGNED_INT = 5125


class BufferBuilder:
    """Accumulates binary data and emits matching bufferView/accessor entries."""

    def __init__(self):
        self.data = bytearray()
        self.buffer_views = []
        self.accessors = []

    def _add_view(self, payload: bytes, target: int | None) -> int:
        pad = (4 - len(self.data) % 4) % 4
        self.data.extend(b"\x00" * pad)
        view = {"buffer": 0, "byteOffset": len(self.data), "byteLength": len(payload)}
        if target is not None:
            view["target"] = target
        self.data.extend(payload)
        self.buffer_views.append(view)
        return len(self.buffer_views) - 1

    def add_float_attribute(self, array: np.ndarray, with_min_max: bool = False) -> int:
        arr = np.ascontiguousarray(array, dtype=np.float32)
        n_comp = 1 if arr.ndim == 1 else arr.shape[1]
        view = self._add_view(arr.tobytes(), target=34962)
        acc = {
            "bufferView": view,
            "componentType": FLOAT,
            "count": int(arr.shape[0]),
            "type": {1: "SCALAR", 2: "VEC2", 3: "VEC3", 4: "VEC4"}[n_comp],
        }
        if with_min_max and arr.size:
            acc["min"] = [float(v) for v in arr.min(axis=0)]
            acc["max"] = [float(v) for v in arr.max(axis=0)]
        self.accessors.append(acc)
        return len(self.accessors) - 1

    def add_indices(self, indices: np.ndarray) -> int:
        flat = np.ascontiguousarray(indices, dtype=np.uint32).reshape(-1)
        if flat.size and flat.max() < 65536:
            flat = flat.astype(np.uint16)
            ctype = UNSIGNED_SHORT
        else:
            ctype = UNSIGNED_INT
        view = self._add_view(flat.tobytes(), target=34963)
        self.accessors.append(
            {
                "bufferView": view,
                "componentType": ctype,
                "count": int(flat.size),
                "type": "SCALAR",
            }
        )
        return len(self.accessors) - 1


def document_from_meshes(meshes, generator: str = "craftpipe") -> GlbDocument:
    """Build a single-scene GLB document.

    `meshes` is a list of dicts with keys: positions (n,3 float), indices
    (m,3 int) or None for non-indexed, optional normals (n,3), uvs (n,2),
    base_color [r,g,b,a], name, and node_translation (3 floats).
    """
    builder = BufferBuilder()
    tree_meshes = []
    tree_nodes = []
    materials = []

    for spec in meshes:
        positions = np.asarray(spec["positions"], dtype=np.float32)
        pos_acc = builder.add_float_attribute(positions, with_min_max=True)
        attributes = {"POSITION": pos_acc}
        if spec.get("normals") is not None:
            attributes["NORMAL"] = builder.add_float_attribute(
                np.asarray(spec["normals"], dtype=np.float32)
            )
        if spec.get("uvs") is not None:
            attributes["TEXCOORD_0"] = builder.add_float_attribute(
                np.asarray(spec["uvs"], dtype=np.float32)
            )
        primitive = {"attributes": attributes, "mode": 4}
        if spec.get("indices") is not None:
            primitive["indices"] = builder.add_indices(np.asarray(spec["indices"]))
        if spec.get("base_color") is not None:
            materials.append(
                {
                    "name": spec.get("name", "material"),
                    "pbrMetallicRoughness": {
                        "baseColorFactor": list(spec["base_color"]),
                        "metallicFactor": 0.0,
                        "roughnessFactor": 0.9,
                    },
                }
            )
            primitive["material"] = len(materials) - 1
        tree_meshes.append(
            {"name": spec.get("name", f"mesh{len(tree_meshes)}"), "primitives": [primitive]}
        )
        node = {"mesh": len(tree_meshes) - 1}
        if spec.get("name"):
            node["name"] = spec["name"]
        if spec.get("node_translation") is not None:
            node["translation"] = [float(v) for v in spec["node_translation"]]
        tree_nodes.append(node)

    tree = {
        "asset": {"version": "2.0", "generator": generator},
        "scene": 0,
        "scenes": [{"nodes": list(range(len(tree_nodes)))}],
        "nodes": tree_nodes,
        "meshes": tree_meshes,
        "accessors": builder.accessors,
        "bufferViews": builder.buffer_views,
        "buffers": [{"byteLength": len(builder.data)}],
    }
    if materials:
        tree["materials"] = materials
    return GlbDocument(tree, bytes(builder.data))


def document_from_mesh(
    positions,
    indices=None,
    normals=None,
    uvs=None,
    base_color=None,
    name: str = "mesh",
    generator: str = "craftpipe",
) -> GlbDocument:
    return document_from_meshes(
        [
            {
                "positions": positions,
                "indices": indices,
                "normals": normals,
                "uvs": uvs,
                "base_color": base_color,
                "name": name,
            }
        ],
        generator=generator,
    )


# --- procedural shapes --------------------------------------------------------


def box_mesh(size=(1.0, 1.0, 1.0), center=(0.0, 0.0, 0.0)):
    """8-vertex indexed box; returns (positions, indices)."""
    sx, sy, sz = (s / 2.0 for s in size)
    cx, cy, cz = center
    corners = np.array(
        [
            [cx - sx, cy - sy, cz - sz],
            [cx + sx, cy - sy, cz - sz],
            [cx + sx, cy + sy, cz - sz],
            [cx - sx, cy + sy, cz - sz],
            [cx - sx, cy - sy, cz + sz],
            [cx + sx, cy - sy, cz + sz],
            [cx + sx, cy + sy, cz + sz],
            [cx - sx, cy + sy, cz + sz],
        ],
        dtype=np.float64,
    )
    faces = np.array(
        [
            [0, 2, 1], [0, 3, 2],  # -z
            [4, 5, 6], [4, 6, 7],  # +z
            [0, 1, 5], [0, 5, 4],  # -y
            [3, 7, 6], [3, 6, 2],  # +y
            [0, 4, 7], [0, 7, 3],  # -x
            [1, 2, 6], [1, 6, 5],  # +x
        ],
        dtype=np.uint32,
    )
    return corners, faces


def icosphere_mesh(subdivisions: int = 3, radius: float = 0.5):
    """Subdivided icosahedron: 20 * 4**subdivisions triangles."""
    t = (1.0 + math.sqrt(5.0)) / 2.0
    verts = [
        (-1, t, 0), (1, t, 0), (-1, -t, 0), (1, -t, 0),
        (0, -1, t), (0, 1, t), (0, -1, -t), (0, 1, -t),
        (t, 0, -1), (t, 0, 1), (-t, 0, -1), (-t, 0, 1),
    ]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]

    def normalized(v):
        n = math.sqrt(v[0] ** 2 + v[1] ** 2 + v[2] ** 2)
        return (v[0] / n * radius, v[1] / n * radius, v[2] / n * radius)

    verts = [normalized(v) for v in verts]
    midpoint_cache = {}

    def midpoint(a, b):
        key = (a, b) if a < b else (b, a)
        if key in midpoint_cache:
            return midpoint_cache[key]
        va, vb = verts[a], verts[b]
        verts.append(
            normalized(((va[0] + vb[0]) / 2, (va[1] + vb[1]) / 2, (va[2] + vb[2]) / 2))
        )
        midpoint_cache[key] = len(verts) - 1
        return midpoint_cache[key]

    for _ in range(subdivisions):
        next_faces = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            next_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = next_faces

    positions = np.array(verts, dtype=np.float64)
    indices = np.array(faces, dtype=np.uint32)
    return positions, indices


def grid_mesh(nx: int, nz: int, size: float = 1.0):
    """Flat XZ grid of (nx * nz * 2) triangles; has an open boundary."""
    xs = np.linspace(-size / 2, size / 2, nx + 1)
    zs = np.linspace(-size / 2, size / 2, nz + 1)
    positions = np.array([(x, 0.0, z) for z in zs for x in xs], dtype=np.float64)
    faces = []
    for j in range(nz):
        for i in range(nx):
            a = j * (nx + 1) + i
            b = a + 1
            c = a + nx + 1
            d = c + 1
            faces += [(a, c, b), (b, c, d)]
    return positions, np.array(faces, dtype=np.uint32)


def compact_document(doc: GlbDocument) -> GlbDocument:
    """Drop unreferenced accessors/bufferViews and rebuild the binary payload.

    Used after geometry rewrites so superseded vertex data stops inflating
    the file. References from mesh primitives (attributes, indices, morph
    targets), images, skins, and animation samplers are kept.
    """
    tree = doc.copy_json()

    used_accessors = set()
    for mesh in tree.get("meshes", []):
        for prim in mesh.get("primitives", []):
            used_accessors.update(prim.get("attributes", {}).values())
            if "indices" in prim:
                used_accessors.add(prim["indices"])
            for target in prim.get("targets", []):
                used_accessors.update(target.values())
    for skin in tree.get("skins", []):
        if "inverseBindMatrices" in skin:
            used_accessors.add(skin["inverseBindMatrices"])
    for anim in tree.get("animations", []):
        for sampler in anim.get("samplers", []):
            used_accessors.update(
                v for k, v in sampler.items() if k in ("input", "output")
            )

    accessors = tree.get("accessors", [])
    views = tree.get("bufferViews", [])
    used_views = set()
    for idx in used_accessors:
        if "bufferView" in accessors[idx]:
            used_views.add(accessors[idx]["bufferView"])
    for image in tree.get("images", []):
        if "bufferView" in image:
            used_views.add(image["bufferView"])

    view_map = {}
    new_views = []
    data = bytearray()
    for old_idx in sorted(used_views):
        view = copy.deepcopy(views[old_idx])
        start = view.get("byteOffset", 0)
        payload = doc.binary[start : start + view.get("byteLength", 0)]
        pad = (4 - len(data) % 4) % 4
        data.extend(b"\x00" * pad)
        view["byteOffset"] = len(data)
        view["buffer"] = 0
        data.extend(payload)
        view_map[old_idx] = len(new_views)
        new_views.append(view)

    acc_map = {}
    new_accessors = []
    for old_idx in sorted(used_accessors):
        acc = copy.deepcopy(accessors[old_idx])
        if "bufferView" in acc:
            acc["bufferView"] = view_map[acc["bufferView"]]
        acc_map[old_idx] = len(new_accessors)
        new_accessors.append(acc)

    for mesh in tree.get("meshes", []):
        for prim in mesh.get("primitives", []):
            prim["attributes"] = {
                k: acc_map[v] for k, v in prim.get("attributes", {}).items()
            }
            if "indices" in prim:
                prim["indices"] = acc_map[prim["indices"]]
            for target in prim.get("targets", []):
                for k in list(target):
                    target[k] = acc_map[target[k]]
    for skin in tree.get("skins", []):
        if "inverseBindMatrices" in skin:
            skin["inverseBindMatrices"] = acc_map[skin["inverseBindMatrices"]]
    for anim in tree.get("animations", []):
        for sampler in anim.get("samplers", []):
            for k in ("input", "output"):
                if k in sampler:
                    sampler[k] = acc_map[sampler[k]]
    for image in tree.get("images", []):
        if "bufferView" in image:
            image["bufferView"] = view_map[image["bufferView"]]

    if new_accessors:
        tree["accessors"] = new_accessors
    else:
        tree.pop("accessors", None)
    if new_views:
        tree["bufferViews"] = new_views
        tree["buffers"] = [{"byteLength": len(data)}]
    else:
        tree.pop("bufferViews", None)
        tree.pop("buffers", None)

    return GlbDocument(tree, bytes(data))


def planar_uvs(positions) -> np.ndarray:
    """Deterministic XY-planar projection into [0, 1]^2 for fixture meshes."""
    pts = np.asarray(positions, dtype=np.float64)
    lo = pts.min(axis=0)
    span = pts.max(axis=0) - lo
    span[span == 0] = 1.0
    return ((pts[:, :2] - lo[:2]) / span[:2]).astype(np.float32)
