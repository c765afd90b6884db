import random
import struct

import pytest

from craftpipe import asset_core as ac
from craftpipe.errors import (
    BadMagic,
    ChunkMisaligned,
    DanglingReference,
    InvariantViolation,
    MalformedJson,
    UnsupportedFeature,
    UnsupportedVersion,
)

from conftest import random_document, unit_cube_doc


def build_minimal_triangle_glb() -> bytes:
    """Hand-assembled GLB per the binary container layout (the parser must
    not be trusted to test itself)."""
    vertices = struct.pack("<9f", 0, 0, 0, 1, 0, 0, 0, 1, 0)
    json_text = (
        '{"asset":{"version":"2.0"},"scene":0,"scenes":[{"nodes":[0]}],'
        '"nodes":[{"mesh":0}],'
        '"meshes":[{"primitives":[{"attributes":{"POSITION":0},"mode":4}]}],'
        '"accessors":[{"bufferView":0,"componentType":5126,"count":3,'
        '"type":"VEC3","min":[0,0,0],"max":[1,1,0]}],'
        '"bufferViews":[{"buffer":0,"byteOffset":0,"byteLength":36}],'
        '"buffers":[{"byteLength":36}]}'
    ).encode()
    json_text += b" " * ((4 - len(json_text) % 4) % 4)
    total = 12 + 8 + len(json_text) + 8 + len(vertices)
    return b"".join(
        [
            struct.pack("<4sII", b"glTF", 2, total),
            struct.pack("<II", len(json_text), 0x4E4F534A),
            json_text,
            struct.pack("<II", len(vertices), 0x004E4942),
            vertices,
        ]
    )


def test_parse_minimal_triangle():
    doc = ac.parse_glb(build_minimal_triangle_glb())
    assert len(doc.meshes) == 1
    assert len(doc.meshes[0]["primitives"]) == 1
    assert doc.accessors[0]["count"] == 3
    positions = ac.read_accessor(doc, 0)
    assert positions.shape == (3, 3)


def test_parse_bad_magic():
    with pytest.raises(BadMagic):
        ac.parse_glb(b"ABCD" + b"\x00" * 20)


def test_parse_empty_input():
    with pytest.raises(ValueError):
        ac.parse_glb(b"")


def test_parse_wrong_version():
    blob = bytearray(build_minimal_triangle_glb())
    struct.pack_into("<I", blob, 4, 1)
    with pytest.raises(UnsupportedVersion):
        ac.parse_glb(bytes(blob))


def test_parse_json_chunk_overruns_container():
    blob = bytearray(build_minimal_triangle_glb())
    struct.pack_into("<I", blob, 12, 1 << 20)  # JSON chunk length > file size
    with pytest.raises(ChunkMisaligned):
        ac.parse_glb(bytes(blob))


def test_parse_unaligned_chunk_length():
    blob = bytearray(build_minimal_triangle_glb())
    struct.pack_into("<I", blob, 12, 13)  # not a multiple of 4
    with pytest.raises(ChunkMisaligned):
        ac.parse_glb(bytes(blob))


def test_parse_declared_length_mismatch():
    blob = build_minimal_triangle_glb() + b"\x00\x00\x00\x00"
    with pytest.raises(ChunkMisaligned):
        ac.parse_glb(blob)


def test_parse_malformed_json():
    vertices = b""
    json_text = b'{"asset": '  # truncated
    json_text += b" " * ((4 - len(json_text) % 4) % 4)
    total = 12 + 8 + len(json_text)
    blob = (
        struct.pack("<4sII", b"glTF", 2, total)
        + struct.pack("<II", len(json_text), 0x4E4F534A)
        + json_text
        + vertices
    )
    with pytest.raises(MalformedJson):
        ac.parse_glb(blob)


def test_parse_dangling_accessor_reference():
    doc = unit_cube_doc()
    tree = doc.copy_json()
    tree["meshes"][0]["primitives"][0]["attributes"]["POSITION"] = 99
    with pytest.raises(DanglingReference):
        ac.GlbDocument(tree, doc.binary)


def test_parse_bufferview_overrun():
    doc = unit_cube_doc()
    tree = doc.copy_json()
    tree["bufferViews"][0]["byteLength"] = len(doc.binary) + 64
    with pytest.raises(DanglingReference):
        ac.GlbDocument(tree, doc.binary)


def test_node_cycle_rejected():
    doc = unit_cube_doc()
    tree = doc.copy_json()
    tree["nodes"][0]["children"] = [0]
    with pytest.raises(InvariantViolation):
        ac.GlbDocument(tree, doc.binary)


def test_sparse_accessor_rejected():
    doc = unit_cube_doc()
    tree = doc.copy_json()
    tree["accessors"][0]["sparse"] = {"count": 1}
    with pytest.raises(UnsupportedFeature):
        ac.GlbDocument(tree, doc.binary)


def test_draco_compression_rejected():
    doc = unit_cube_doc()
    tree = doc.copy_json()
    tree["meshes"][0]["primitives"][0]["extensions"] = {
        "KHR_draco_mesh_compression": {"bufferView": 0}
    }
    with pytest.raises(UnsupportedFeature):
        ac.GlbDocument(tree, doc.binary)


def test_read_interleaved_accessor():
    # one bufferView holding interleaved POSITION+NORMAL, stride 24
    import numpy as np

    vertex = struct.Struct("<3f3f")
    payload = b"".join(
        vertex.pack(i, i + 0.5, -i, 0, 1, 0) for i in range(5)
    )
    tree = {
        "asset": {"version": "2.0"},
        "scene": 0,
        "scenes": [{"nodes": [0]}],
        "nodes": [{"mesh": 0}],
        "meshes": [
            {
                "primitives": [
                    {"attributes": {"POSITION": 0, "NORMAL": 1}, "mode": 4}
                ]
            }
        ],
        "accessors": [
            {
                "bufferView": 0, "byteOffset": 0, "componentType": 5126,
                "count": 5, "type": "VEC3",
            },
            {
                "bufferView": 0, "byteOffset": 12, "componentType": 5126,
                "count": 5, "type": "VEC3",
            },
        ],
        "bufferViews": [
            {"buffer": 0, "byteOffset": 0, "byteLength": len(payload), "byteStride": 24}
        ],
        "buffers": [{"byteLength": len(payload)}],
    }
    doc = ac.GlbDocument(tree, payload)
    positions = ac.read_accessor(doc, 0)
    normals = ac.read_accessor(doc, 1)
    expected = np.array([[i, i + 0.5, -i] for i in range(5)], dtype=np.float32)
    assert np.array_equal(positions, expected)
    assert np.array_equal(normals, np.tile([0, 1, 0], (5, 1)).astype(np.float32))


def test_roundtrip_document_without_binary():
    doc = ac.GlbDocument(
        {"asset": {"version": "2.0"}, "scene": 0, "scenes": [{"nodes": []}]}
    )
    blob = ac.write_glb(doc)
    again = ac.parse_glb(blob)
    assert again.binary == b""
    assert doc.semantically_equal(again)


def test_external_buffer_rejected():
    doc = unit_cube_doc()
    tree = doc.copy_json()
    tree["buffers"][0]["uri"] = "external.bin"
    with pytest.raises(UnsupportedFeature):
        ac.GlbDocument(tree, doc.binary)


def test_roundtrip_minimal_triangle():
    doc = ac.parse_glb(build_minimal_triangle_glb())
    again = ac.parse_glb(ac.write_glb(doc))
    assert doc.semantically_equal(again)


def test_roundtrip_preserves_unknown_extension():
    doc = unit_cube_doc()
    tree = doc.copy_json()
    tree.setdefault("extensions", {})["VENDOR_custom_probe"] = {"alpha": [1, 2, 3]}
    tree["extensionsUsed"] = ["VENDOR_custom_probe"]
    doc = doc.with_json(tree)
    again = ac.parse_glb(ac.write_glb(doc))
    assert again.json_tree["extensions"]["VENDOR_custom_probe"] == {"alpha": [1, 2, 3]}
    assert doc.semantically_equal(again)


def test_roundtrip_randomized_documents():
    rng = random.Random(0xC0FFEE)
    for _ in range(100):
        doc = random_document(rng)
        again = ac.parse_glb(ac.write_glb(doc))
        assert doc.semantically_equal(again)


def test_write_rejects_mutated_document():
    doc = unit_cube_doc()
    doc.json_tree["meshes"][0]["primitives"][0]["attributes"]["POSITION"] = 42
    with pytest.raises(InvariantViolation):
        ac.write_glb(doc)


def test_binary_payload_padded_to_four_bytes():
    doc = ac.GlbDocument(
        {"asset": {"version": "2.0"}, "scene": 0, "scenes": [{"nodes": []}]},
        b"\x01\x02\x03",
    )
    assert len(doc.binary) % 4 == 0
    assert doc.binary[:3] == b"\x01\x02\x03"


def test_default_scene_required():
    with pytest.raises(InvariantViolation):
        ac.GlbDocument({"asset": {"version": "2.0"}, "scenes": []})
    with pytest.raises(InvariantViolation):
        ac.GlbDocument(
            {"asset": {"version": "2.0"}, "scenes": [{"nodes": []}, {"nodes": []}]}
        )
    # single scene: implicit default is fine
    doc = ac.GlbDocument({"asset": {"version": "2.0"}, "scenes": [{"nodes": []}]})
    assert doc.default_scene_index == 0
