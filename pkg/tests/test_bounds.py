import math
import random
import struct

import pytest

from craftpipe import asset_core as ac
from craftpipe.asset_core.types import Aabb, Rotation, Transform, Vec3

from conftest import random_scene_document, unit_cube_doc


# --- independent oracle: per-vertex struct decoding, own quaternion math -------


def _oracle_quat_matrix(q):
    x, y, z, w = q
    n = math.sqrt(x * x + y * y + z * z + w * w)
    x, y, z, w = x / n, y / n, z / n, w / n
    return [
        [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
        [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
        [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
    ]


def _oracle_node_matrix(node):
    if "matrix" in node:
        m = node["matrix"]
        return [[m[col * 4 + row] for col in range(4)] for row in range(4)]
    t = node.get("translation", [0, 0, 0])
    r = _oracle_quat_matrix(node.get("rotation", [0, 0, 0, 1]))
    s = node.get("scale", [1, 1, 1])
    out = [[0.0] * 4 for _ in range(4)]
    for i in range(3):
        for j in range(3):
            out[i][j] = r[i][j] * s[j]
        out[i][3] = t[i]
    out[3][3] = 1.0
    return out


def _matmul4(a, b):
    return [
        [sum(a[i][k] * b[k][j] for k in range(4)) for j in range(4)] for i in range(4)
    ]


def _apply(m, v):
    return [
        m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2] + m[i][3] for i in range(3)
    ]


def _oracle_vertices(doc, accessor_index):
    acc = doc.accessors[accessor_index]
    view = doc.buffer_views[acc["bufferView"]]
    base = view.get("byteOffset", 0) + acc.get("byteOffset", 0)
    stride = view.get("byteStride", 12)
    for i in range(acc["count"]):
        yield struct.unpack_from("<3f", doc.binary, base + i * stride)


def oracle_world_aabb(doc):
    identity = [[float(i == j) for j in range(4)] for i in range(4)]
    lo = [math.inf] * 3
    hi = [-math.inf] * 3
    seen = False

    def walk(index, parent):
        nonlocal seen
        node = doc.nodes[index]
        world = _matmul4(parent, _oracle_node_matrix(node))
        if "mesh" in node:
            for prim in doc.meshes[node["mesh"]].get("primitives", []):
                pos = prim.get("attributes", {}).get("POSITION")
                if pos is None:
                    continue
                for vertex in _oracle_vertices(doc, pos):
                    world_v = _apply(world, vertex)
                    for k in range(3):
                        lo[k] = min(lo[k], world_v[k])
                        hi[k] = max(hi[k], world_v[k])
                    seen = True
        for child in node.get("children", []):
            walk(child, world)

    for root in doc.default_scene.get("nodes", []):
        walk(root, identity)
    return (lo, hi) if seen else None


# --- examples -------------------------------------------------------------------


def test_unit_cube_aabb():
    aabb = ac.compute_world_aabb(unit_cube_doc())
    assert aabb.min.as_tuple() == pytest.approx((-0.5, -0.5, -0.5))
    assert aabb.max.as_tuple() == pytest.approx((0.5, 0.5, 0.5))


def test_cube_under_scale_and_translation():
    doc = unit_cube_doc()
    tree = doc.copy_json()
    tree["nodes"][0]["scale"] = [2.0, 2.0, 2.0]
    tree["nodes"][0]["translation"] = [1.0, 0.0, 0.0]
    aabb = ac.compute_world_aabb(doc.with_json(tree))
    assert aabb.min.as_tuple() == pytest.approx((0.0, -1.0, -1.0), abs=1e-9)
    assert aabb.max.as_tuple() == pytest.approx((2.0, 1.0, 1.0), abs=1e-9)
    lo, hi = oracle_world_aabb(doc.with_json(tree))
    assert aabb.min.as_tuple() == pytest.approx(tuple(lo), abs=1e-9)
    assert aabb.max.as_tuple() == pytest.approx(tuple(hi), abs=1e-9)


def test_two_displaced_cubes_union():
    p, f = ac.box_mesh()
    doc = ac.document_from_meshes(
        [
            {"positions": p, "indices": f, "node_translation": [-2.0, 0.0, 0.0]},
            {"positions": p, "indices": f, "node_translation": [3.0, 1.0, 0.0]},
        ]
    )
    aabb = ac.compute_world_aabb(doc)
    lo, hi = oracle_world_aabb(doc)
    assert aabb.min.as_tuple() == pytest.approx(tuple(lo), abs=1e-9)
    assert aabb.max.as_tuple() == pytest.approx(tuple(hi), abs=1e-9)
    assert aabb.min.x == pytest.approx(-2.5)
    assert aabb.max.x == pytest.approx(3.5)


def test_empty_scene_has_no_aabb():
    doc = ac.GlbDocument(
        {"asset": {"version": "2.0"}, "scene": 0, "scenes": [{"nodes": []}]}
    )
    assert ac.compute_world_aabb(doc) is None


def test_aabb_random_scenes_match_oracle():
    rng = random.Random(0xA0B1)
    for _ in range(120):
        doc = random_scene_document(rng)
        aabb = ac.compute_world_aabb(doc)
        expected = oracle_world_aabb(doc)
        if expected is None:
            assert aabb is None
            continue
        lo, hi = expected
        for got, want in zip(aabb.min.as_tuple(), lo):
            assert abs(got - want) <= 1e-6
        for got, want in zip(aabb.max.as_tuple(), hi):
            assert abs(got - want) <= 1e-6


# --- longest_span -----------------------------------------------------------------


def test_longest_span_examples():
    assert ac.longest_span(Aabb(Vec3(0, 0, 0), Vec3(1, 2, 0.5))) == 2.0
    assert ac.longest_span(Aabb(Vec3(-0.5, -0.5, -0.5), Vec3(0.5, 0.5, 0.5))) == 1.0
    assert ac.longest_span(Aabb(Vec3(0, 0, 0), Vec3(3, 0, 0))) == 3.0


def test_span_invariant_under_translation():
    doc = unit_cube_doc()
    base = ac.longest_span(ac.compute_world_aabb(doc))
    moved = ac.apply_root_transform(
        doc, Transform(translation=Vec3(5.0, -3.0, 2.0))
    )
    assert ac.longest_span(ac.compute_world_aabb(moved)) == pytest.approx(base, abs=1e-9)


def test_span_scales_linearly():
    rng = random.Random(7)
    doc = unit_cube_doc()
    base = ac.longest_span(ac.compute_world_aabb(doc))
    for _ in range(20):
        s = rng.uniform(0.05, 20.0)
        scaled = ac.apply_root_transform(doc, Transform.uniform_scale(s))
        span = ac.longest_span(ac.compute_world_aabb(scaled))
        assert abs(span - s * base) <= 1e-6 * s


# --- apply_root_transform ----------------------------------------------------------


def test_identity_transform_preserves_aabb():
    doc = unit_cube_doc()
    wrapped = ac.apply_root_transform(doc, Transform.identity())
    a = ac.compute_world_aabb(doc)
    b = ac.compute_world_aabb(wrapped)
    assert a.min.as_tuple() == pytest.approx(b.min.as_tuple(), abs=1e-12)
    assert a.max.as_tuple() == pytest.approx(b.max.as_tuple(), abs=1e-12)


def test_uniform_scale_shrinks_span():
    doc = unit_cube_doc()
    scaled = ac.apply_root_transform(doc, Transform.uniform_scale(0.3))
    assert ac.longest_span(ac.compute_world_aabb(scaled)) == pytest.approx(0.3, abs=1e-6)


def test_rotation_permutes_spans():
    p, f = ac.box_mesh(size=(1.0, 2.0, 3.0))
    doc = ac.document_from_mesh(p, f)
    half = math.sqrt(0.5)
    rotated = ac.apply_root_transform(
        doc, Transform(rotation=Rotation(0.0, half, 0.0, half))  # 90 deg about Y
    )
    aabb = ac.compute_world_aabb(rotated)
    size = aabb.size()
    assert (size.x, size.y, size.z) == pytest.approx((3.0, 2.0, 1.0), abs=1e-6)
    lo, hi = oracle_world_aabb(rotated)
    assert aabb.min.as_tuple() == pytest.approx(tuple(lo), abs=1e-9)
    assert aabb.max.as_tuple() == pytest.approx(tuple(hi), abs=1e-9)


def test_transform_is_structural_not_baked():
    doc = unit_cube_doc()
    wrapped = ac.apply_root_transform(doc, Transform.uniform_scale(4.0))
    # vertex data untouched: same accessor bytes
    assert wrapped.binary == doc.binary
    assert len(wrapped.nodes) == len(doc.nodes) + 1
    assert wrapped.nodes[-1]["name"] == ac.ROOT_WRAPPER_NAME


def test_vec3_rejects_nan():
    from craftpipe.errors import InvariantViolation

    with pytest.raises(InvariantViolation):
        Vec3(float("nan"), 0.0, 0.0)


def test_rotation_requires_unit_norm():
    from craftpipe.errors import InvariantViolation

    with pytest.raises(InvariantViolation):
        Rotation(0.0, 2.0, 0.0, 0.0)


def test_transform_requires_positive_scale():
    from craftpipe.errors import InvariantViolation

    with pytest.raises(InvariantViolation):
        Transform(scale=Vec3(0.0, 1.0, 1.0))
