import math
import random

import numpy as np
import pytest

from craftpipe import asset_core as ac
from craftpipe.asset_core.build import BufferBuilder


class FakeClock:
    """Deterministic time source; sleep() advances it instead of blocking."""

    def __init__(self, start=1_000_000.0):
        self.now = start

    def __call__(self):
        return self.now

    def sleep(self, seconds):
        self.now += seconds

    def tick(self, seconds=1.0):
        self.now += seconds
        return self.now


@pytest.fixture
def fake_clock():
    return FakeClock()


def unit_cube_doc(**kwargs):
    positions, indices = ac.box_mesh()
    return ac.document_from_mesh(positions, indices, **kwargs)


def random_unit_quat(rng: random.Random):
    while True:
        q = [rng.gauss(0, 1) for _ in range(4)]
        n = math.sqrt(sum(v * v for v in q))
        if n > 1e-6:
            return [v / n for v in q]


def random_document(rng: random.Random):
    """Small random single-level document for round-trip testing."""
    meshes = []
    for i in range(rng.randint(1, 3)):
        n_tris = rng.randint(1, 8)
        positions = np.array(
            [[rng.uniform(-2, 2) for _ in range(3)] for _ in range(3 * n_tris)],
            dtype=np.float32,
        )
        indexed = rng.random() < 0.7
        spec = {
            "positions": positions,
            "indices": np.arange(3 * n_tris, dtype=np.uint32).reshape(-1, 3)
            if indexed
            else None,
            "name": f"mesh{i}",
            "node_translation": [rng.uniform(-1, 1) for _ in range(3)],
        }
        if rng.random() < 0.5:
            spec["uvs"] = np.array(
                [[rng.random(), rng.random()] for _ in range(3 * n_tris)],
                dtype=np.float32,
            )
        if rng.random() < 0.5:
            spec["base_color"] = [rng.random(), rng.random(), rng.random(), 1.0]
        meshes.append(spec)
    doc = ac.document_from_meshes(meshes, generator="roundtrip-test")

    tree = doc.copy_json()
    if rng.random() < 0.5:
        tree.setdefault("extensions", {})
        tree["extensions"]["VENDOR_roundtrip_probe"] = {
            "flag": rng.random() < 0.5,
            "value": rng.uniform(-10, 10),
            "items": [rng.randint(0, 99) for _ in range(rng.randint(0, 4))],
        }
        tree["extensionsUsed"] = ["VENDOR_roundtrip_probe"]
    if rng.random() < 0.3:
        tree["asset"]["extras"] = {"note": f"probe-{rng.randint(0, 1 << 30)}"}
    return doc.with_json(tree)


def random_scene_document(rng: random.Random, max_nodes=5, max_vertices=64):
    """Random node hierarchy (TRS and matrix nodes) for AABB oracle testing."""
    builder = BufferBuilder()
    n_nodes = rng.randint(1, max_nodes)

    meshes = []
    nodes = []
    for i in range(n_nodes):
        node = {}
        if rng.random() < 0.8:  # some nodes are pure grouping nodes
            n_verts = rng.randint(3, max_vertices)
            positions = np.array(
                [[rng.uniform(-3, 3) for _ in range(3)] for _ in range(n_verts)],
                dtype=np.float32,
            )
            acc = builder.add_float_attribute(positions, with_min_max=True)
            meshes.append(
                {"primitives": [{"attributes": {"POSITION": acc}, "mode": 4}]}
            )
            node["mesh"] = len(meshes) - 1
        if rng.random() < 0.3:
            # matrix node: TRS composed externally so it stays decomposable
            import craftpipe.mathutil as mu

            m = mu.trs_matrix(
                [rng.uniform(-2, 2) for _ in range(3)],
                random_unit_quat(rng),
                [rng.uniform(0.2, 2.5) for _ in range(3)],
            )
            node["matrix"] = mu.matrix_to_gltf(m)
        else:
            node["translation"] = [rng.uniform(-2, 2) for _ in range(3)]
            node["rotation"] = random_unit_quat(rng)
            node["scale"] = [rng.uniform(0.2, 2.5) for _ in range(3)]
        nodes.append(node)

    # random forest: each node either a root or a child of an earlier node
    roots = [0]
    for i in range(1, n_nodes):
        if rng.random() < 0.5:
            parent = rng.randrange(i)
            nodes[parent].setdefault("children", []).append(i)
        else:
            roots.append(i)

    tree = {
        "asset": {"version": "2.0", "generator": "scene-test"},
        "scene": 0,
        "scenes": [{"nodes": roots}],
        "nodes": nodes,
        "accessors": builder.accessors,
        "bufferViews": builder.buffer_views,
        "buffers": [{"byteLength": len(builder.data)}],
    }
    if meshes:
        tree["meshes"] = meshes
    return ac.GlbDocument(tree, bytes(builder.data))
