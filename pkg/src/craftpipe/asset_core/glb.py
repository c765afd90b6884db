"""GLB (binary glTF 2.0) container parsing, validation, and serialization.

Only the binary container is supported: a 12-byte header, one JSON chunk,
and an optional BIN chunk. Text .gltf with external buffers is rejected so
the ingestion path stays single-format. Parsing keeps the JSON tree verbatim
(unknown extensions included); writing re-emits it compactly, so
parse(write(doc)) is semantically the identity.
"""

from __future__ import annotations

import copy
import json
import struct
from dataclasses import dataclass

from ..errors import (
    BadMagic,
    ChunkMisaligned,
    CraftError,
    DanglingReference,
    InvariantViolation,
    MalformedJson,
    UnsupportedFeature,
    UnsupportedVersion,
)

GLB_MAGIC = b"glTF"
CHUNK_JSON = 0x4E4F534A
CHUNK_BIN = 0x004E4942

# accessor componentType -> byte size
COMPONENT_BYTE_SIZE = {5120: 1, 5121: 1, 5122: 2, 5123: 2, 5125: 4, 5126: 4}
TYPE_COMPONENT_COUNT = {
    "SCALAR": 1,
    "VEC2": 2,
    "VEC3": 3,
    "VEC4": 4,
    "MAT2": 4,
    "MAT3": 9,
    "MAT4": 16,
}


def _pad4(n: int) -> int:
    return (4 - n % 4) % 4


@dataclass(frozen=True)
class GlbDocument:
    """An immutable, validated glTF 2.0 document plus its binary payload.

    The JSON tree is held as plain dicts/lists exactly as parsed; mutating it
    in place is a contract violation. Use `with_json` to derive new documents.
    """

    json_tree: dict
    binary: bytes = b""

    def __post_init__(self):
        # Chunk payloads are 4-byte padded inside the container, so keep the
        # canonical in-memory form padded too; round-trips stay byte-identical.
        pad = _pad4(len(self.binary))
        if pad:
            object.__setattr__(self, "binary", self.binary + b"\x00" * pad)
        validate_document(self)

    # --- convenience accessors ------------------------------------------------

    @property
    def declared_generator(self) -> str:
        return self.json_tree.get("asset", {}).get("generator", "")

    @property
    def scenes(self) -> list:
        return self.json_tree.get("scenes", [])

    @property
    def nodes(self) -> list:
        return self.json_tree.get("nodes", [])

    @property
    def meshes(self) -> list:
        return self.json_tree.get("meshes", [])

    @property
    def accessors(self) -> list:
        return self.json_tree.get("accessors", [])

    @property
    def buffer_views(self) -> list:
        return self.json_tree.get("bufferViews", [])

    @property
    def default_scene_index(self) -> int:
        return self.json_tree.get("scene", 0)

    @property
    def default_scene(self) -> dict:
        return self.scenes[self.default_scene_index]

    def with_json(self, json_tree: dict, binary: bytes | None = None) -> "GlbDocument":
        return GlbDocument(json_tree, self.binary if binary is None else binary)

    def copy_json(self) -> dict:
        return copy.deepcopy(self.json_tree)

    def semantically_equal(self, other: "GlbDocument") -> bool:
        """JSON trees equal (key order irrelevant) and payload byte-identical."""
        return self.json_tree == other.json_tree and self.binary == other.binary


def _check_index(value, count, what):
    if not isinstance(value, int) or isinstance(value, bool) or not 0 <= value < count:
        raise DanglingReference(f"{what} index {value!r} out of range [0, {count})")


def validate_document(doc: GlbDocument) -> None:
    """Raise if any GlbDocument invariant is broken."""
    tree = doc.json_tree
    if not isinstance(tree, dict):
        raise MalformedJson("top-level glTF JSON must be an object")

    asset = tree.get("asset")
    if not isinstance(asset, dict) or "version" not in asset:
        raise InvariantViolation("missing asset.version")
    if not str(asset["version"]).startswith("2."):
        raise UnsupportedVersion(f"glTF asset version {asset['version']!r}, need 2.x")

    buffers = tree.get("buffers", [])
    for i, buf in enumerate(buffers):
        if "uri" in buf:
            raise UnsupportedFeature(
                f"buffers[{i}] has a uri; external or embedded buffers are not supported"
            )
        if buf.get("byteLength", 0) > len(doc.binary):
            raise DanglingReference(
                f"buffers[{i}].byteLength {buf.get('byteLength')} exceeds "
                f"binary payload of {len(doc.binary)} bytes"
            )

    views = tree.get("bufferViews", [])
    for i, view in enumerate(views):
        _check_index(view.get("buffer"), len(buffers), f"bufferViews[{i}].buffer")
        offset = view.get("byteOffset", 0)
        length = view.get("byteLength", 0)
        if offset < 0 or length < 0 or offset + length > len(doc.binary):
            raise DanglingReference(
                f"bufferViews[{i}] spans [{offset}, {offset + length}) outside the "
                f"{len(doc.binary)}-byte payload"
            )

    accessors = tree.get("accessors", [])
    for i, acc in enumerate(accessors):
        if "sparse" in acc:
            raise UnsupportedFeature(f"accessors[{i}] is sparse")
        if "bufferView" not in acc:
            continue  # zero-filled accessor, legal per spec
        _check_index(acc["bufferView"], len(views), f"accessors[{i}].bufferView")
        view = views[acc["bufferView"]]
        comp_size = COMPONENT_BYTE_SIZE.get(acc.get("componentType"))
        n_comp = TYPE_COMPONENT_COUNT.get(acc.get("type"))
        if comp_size is None or n_comp is None:
            raise MalformedJson(
                f"accessors[{i}] has unknown componentType/type "
                f"{acc.get('componentType')!r}/{acc.get('type')!r}"
            )
        count = acc.get("count", 0)
        elem = comp_size * n_comp
        stride = view.get("byteStride", elem)
        offset = acc.get("byteOffset", 0)
        needed = 0 if count == 0 else offset + (count - 1) * stride + elem
        if needed > view.get("byteLength", 0):
            raise DanglingReference(
                f"accessors[{i}] needs {needed} bytes but bufferView "
                f"{acc['bufferView']} holds {view.get('byteLength', 0)}"
            )

    meshes = tree.get("meshes", [])
    materials = tree.get("materials", [])
    for i, mesh in enumerate(meshes):
        for j, prim in enumerate(mesh.get("primitives", [])):
            where = f"meshes[{i}].primitives[{j}]"
            if "KHR_draco_mesh_compression" in prim.get("extensions", {}):
                raise UnsupportedFeature(f"{where} uses Draco compression")
            for attr, acc_idx in prim.get("attributes", {}).items():
                _check_index(acc_idx, len(accessors), f"{where}.attributes.{attr}")
            if "indices" in prim:
                _check_index(prim["indices"], len(accessors), f"{where}.indices")
            if "material" in prim:
                _check_index(prim["material"], len(materials), f"{where}.material")

    nodes = tree.get("nodes", [])
    for i, node in enumerate(nodes):
        if "mesh" in node:
            _check_index(node["mesh"], len(meshes), f"nodes[{i}].mesh")
        for child in node.get("children", []):
            _check_index(child, len(nodes), f"nodes[{i}].children")

    # acyclicity: iterative DFS with coloring over every node
    WHITE, GRAY, BLACK = 0, 1, 2
    color = [WHITE] * len(nodes)
    for start in range(len(nodes)):
        if color[start] != WHITE:
            continue
        stack = [(start, iter(nodes[start].get("children", [])))]
        color[start] = GRAY
        while stack:
            idx, children = stack[-1]
            advanced = False
            for child in children:
                if color[child] == GRAY:
                    raise InvariantViolation(f"node graph has a cycle through node {child}")
                if color[child] == WHITE:
                    color[child] = GRAY
                    stack.append((child, iter(nodes[child].get("children", []))))
                    advanced = True
                    break
            if not advanced:
                color[idx] = BLACK
                stack.pop()

    scenes = tree.get("scenes", [])
    for i, scene in enumerate(scenes):
        for n in scene.get("nodes", []):
            _check_index(n, len(nodes), f"scenes[{i}].nodes")
    if not scenes:
        raise InvariantViolation("document has no scenes")
    if "scene" in tree:
        _check_index(tree["scene"], len(scenes), "scene")
    elif len(scenes) != 1:
        raise InvariantViolation(
            f"{len(scenes)} scenes but no default scene selector"
        )


def parse_glb(data: bytes) -> GlbDocument:
    """Parse a GLB container into a validated document.

    Raises BadMagic, UnsupportedVersion, ChunkMisaligned, MalformedJson,
    DanglingReference, UnsupportedFeature, or InvariantViolation.
    """
    if not data:
        raise ValueError("empty input")
    if data[:4] != GLB_MAGIC:
        raise BadMagic(f"expected {GLB_MAGIC!r}, got {bytes(data[:4])!r}")
    if len(data) < 12:
        raise ChunkMisaligned(f"container truncated at {len(data)} bytes")
    version, total = struct.unpack_from("<II", data, 4)
    if version != 2:
        raise UnsupportedVersion(f"GLB version {version}, need 2")
    if total != len(data):
        raise ChunkMisaligned(f"declared length {total} != container size {len(data)}")

    chunks = []
    offset = 12
    while offset < total:
        if offset + 8 > total:
            raise ChunkMisaligned(f"chunk header truncated at offset {offset}")
        length, ctype = struct.unpack_from("<II", data, offset)
        if length % 4 != 0:
            raise ChunkMisaligned(f"chunk at {offset} has unaligned length {length}")
        if offset + 8 + length > total:
            raise ChunkMisaligned(
                f"chunk at {offset} with length {length} exceeds container"
            )
        chunks.append((ctype, data[offset + 8 : offset + 8 + length]))
        offset += 8 + length

    if not chunks or chunks[0][0] != CHUNK_JSON:
        raise ChunkMisaligned("first chunk must be the JSON chunk")
    if sum(1 for t, _ in chunks if t == CHUNK_JSON) > 1:
        raise ChunkMisaligned("multiple JSON chunks")
    bins = [c for t, c in chunks if t == CHUNK_BIN]
    if len(bins) > 1:
        raise ChunkMisaligned("multiple BIN chunks")

    try:
        tree = json.loads(chunks[0][1].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedJson(str(exc)) from exc
    if not isinstance(tree, dict):
        raise MalformedJson("top-level glTF JSON must be an object")

    return GlbDocument(tree, bins[0] if bins else b"")


def write_glb(doc: GlbDocument) -> bytes:
    """Serialize a document to a spec-conformant GLB byte sequence.

    Raises InvariantViolation when the document was mutated into an
    inconsistent state after construction.
    """
    try:
        validate_document(doc)
    except CraftError as exc:
        raise InvariantViolation(f"document is inconsistent: {exc}") from exc

    json_bytes = json.dumps(
        doc.json_tree, separators=(",", ":"), ensure_ascii=False
    ).encode("utf-8")
    json_bytes += b" " * _pad4(len(json_bytes))

    parts = [struct.pack("<4sII", GLB_MAGIC, 2, 0)]
    parts.append(struct.pack("<II", len(json_bytes), CHUNK_JSON))
    parts.append(json_bytes)
    if doc.binary:
        parts.append(struct.pack("<II", len(doc.binary), CHUNK_BIN))
        parts.append(doc.binary)

    blob = bytearray(b"".join(parts))
    struct.pack_into("<I", blob, 8, len(blob))
    return bytes(blob)
