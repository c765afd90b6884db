"""Document-level decimation driving the edge-collapse kernel.

The compiled Cython kernel is preferred and the pure-Python twin is the
import-time fallback; both produce identical output (see benchmarks/).
Each primitive is decimated toward a proportional share of the document
target, then superseded vertex data is compacted out of the buffer.
"""

from __future__ import annotations

import numpy as np

from ..asset_core.accessors import is_float_vec, is_index_type, read_accessor
from ..asset_core.build import compact_document
from ..asset_core.glb import GlbDocument
from ..errors import DecimationFailed
from .budget import iter_triangle_primitives, measure, primitive_triangle_count

try:
    from . import _qem_cy as _kernel

    KERNEL_NAME = "cython"
except ImportError:  # extension not built; identical pure twin
    from . import _qem_py as _kernel

    KERNEL_NAME = "pure-python"

MIN_TARGET = 4


def active_kernel_name() -> str:
    return KERNEL_NAME


def _allocate(tri_counts: list, target: int) -> list:
    """Per-primitive triangle budgets: proportional, >= 1 each, sum <= target."""
    total = sum(tri_counts)
    alloc = [min(t, max(1, target * t // total)) for t in tri_counts]
    if sum(alloc) > target:
        raise DecimationFailed(
            f"cannot split a {target}-triangle budget across "
            f"{len(tri_counts)} primitives"
        )
    spare = target - sum(alloc)
    while spare > 0:
        deficits = [
            (tri_counts[i] - alloc[i], i) for i in range(len(alloc))
            if tri_counts[i] > alloc[i]
        ]
        if not deficits:
            break
        deficit, i = max(deficits, key=lambda d: (d[0], -d[1]))
        grant = min(spare, deficit)
        alloc[i] += grant
        spare -= grant
    return alloc


def _gatherable_attributes(doc: GlbDocument, prim: dict):
    """Float vertex attributes that can be carried per surviving vertex."""
    out = {}
    for name, acc_idx in prim.get("attributes", {}).items():
        if name == "POSITION":
            continue
        acc = doc.accessors[acc_idx]
        if acc.get("componentType") == 5126 and acc.get("type") in (
            "SCALAR", "VEC2", "VEC3", "VEC4",
        ):
            out[name] = read_accessor(doc, acc_idx)
    return out


def decimate(doc: GlbDocument, target_triangles: int) -> GlbDocument:
    """Reduce the document to at most `target_triangles` triangles.

    Already-fitting documents are returned unchanged. Surviving vertices
    stay within the original bounds inflated by 1% of the longest span;
    materials and decodable float attributes (normals, UVs) are preserved
    per surviving vertex. Raises DecimationFailed when the target cannot be
    reached without destroying the mesh.
    """
    if target_triangles < MIN_TARGET:
        raise ValueError(f"target must be >= {MIN_TARGET}, got {target_triangles}")
    total, _ = measure(doc)
    if total <= target_triangles:
        return doc

    prims = []
    for mi, pi, prim in iter_triangle_primitives(doc):
        count = primitive_triangle_count(doc, prim)
        if count:
            prims.append((mi, pi, prim, count))
    alloc = _allocate([c for _, _, _, c in prims], target_triangles)

    tree = doc.copy_json()
    binary = bytearray(doc.binary)
    accessors = tree.setdefault("accessors", [])
    views = tree.setdefault("bufferViews", [])

    def append_data(payload: bytes, target_hint: int) -> int:
        pad = (4 - len(binary) % 4) % 4
        binary.extend(b"\x00" * pad)
        views.append(
            {
                "buffer": 0,
                "byteOffset": len(binary),
                "byteLength": len(payload),
                "target": target_hint,
            }
        )
        binary.extend(payload)
        return len(views) - 1

    def append_float_accessor(array: np.ndarray, with_min_max: bool) -> int:
        arr = np.ascontiguousarray(array, dtype=np.float32)
        n_comp = 1 if arr.ndim == 1 else arr.shape[1]
        entry = {
            "bufferView": append_data(arr.tobytes(), 34962),
            "componentType": 5126,
            "count": int(arr.shape[0]),
            "type": {1: "SCALAR", 2: "VEC2", 3: "VEC3", 4: "VEC4"}[n_comp],
        }
        if with_min_max and arr.size:
            entry["min"] = [float(v) for v in arr.min(axis=0)]
            entry["max"] = [float(v) for v in arr.max(axis=0)]
        accessors.append(entry)
        return len(accessors) - 1

    def append_index_accessor(flat: np.ndarray) -> int:
        if flat.size and flat.max() < 65536:
            arr = flat.astype(np.uint16)
            ctype = 5123
        else:
            arr = flat.astype(np.uint32)
            ctype = 5125
        accessors.append(
            {
                "bufferView": append_data(arr.tobytes(), 34963),
                "componentType": ctype,
                "count": int(arr.size),
                "type": "SCALAR",
            }
        )
        return len(accessors) - 1

    for (mi, pi, prim, count), budget in zip(prims, alloc):
        if count <= budget:
            continue
        pos_idx = prim.get("attributes", {}).get("POSITION")
        if pos_idx is None or not is_float_vec(doc, pos_idx, 3):
            raise DecimationFailed(
                f"meshes[{mi}] primitive lacks decodable float POSITION data"
            )
        positions = read_accessor(doc, pos_idx).astype(np.float64)
        if "indices" in prim:
            if not is_index_type(doc, prim["indices"]):
                raise DecimationFailed(f"meshes[{mi}] primitive has non-integer indices")
            faces = read_accessor(doc, prim["indices"]).astype(np.int64)
        else:
            faces = np.arange(positions.shape[0], dtype=np.int64)

        result = _kernel.decimate_arrays(
            positions.reshape(-1).tolist(), faces.reshape(-1).tolist(), budget
        )
        if result is None:
            raise DecimationFailed(
                f"meshes[{mi}] primitive cannot reach {budget} triangles "
                f"without destroying the mesh"
            )
        new_pos_flat, new_faces_flat, orig = result
        new_positions = np.array(new_pos_flat, dtype=np.float64).reshape(-1, 3)
        new_faces = np.array(new_faces_flat, dtype=np.int64)
        orig = np.array(orig, dtype=np.int64)

        carried = _gatherable_attributes(doc, prim)
        live_prim = tree["meshes"][mi]["primitives"][pi]
        live_prim["attributes"]["POSITION"] = append_float_accessor(
            new_positions, with_min_max=True
        )
        for name, values in carried.items():
            live_prim["attributes"][name] = append_float_accessor(
                values[orig], with_min_max=False
            )
        # attributes we cannot decode cannot be remapped; drop them
        for name in list(live_prim["attributes"]):
            if name != "POSITION" and name not in carried:
                del live_prim["attributes"][name]
        live_prim["indices"] = append_index_accessor(new_faces)

    return compact_document(doc.with_json(tree, bytes(binary)))
