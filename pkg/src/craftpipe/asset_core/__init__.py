"""GLB/glTF container parsing, validation, transformation, and assembly."""

from .types import Aabb, Rotation, Transform, Vec3
from .glb import GlbDocument, parse_glb, validate_document, write_glb
from .accessors import read_accessor
from .bounds import compute_world_aabb, longest_span
from .build import (
    box_mesh,
    document_from_mesh,
    document_from_meshes,
    grid_mesh,
    icosphere_mesh,
    planar_uvs,
)
from .transform import ROOT_WRAPPER_NAME, apply_root_transform
from .assemble import (
    AssemblyBundle,
    AssetMetadata,
    assemble,
    build_assembled_document,
    read_bundle_extensions,
)

__all__ = [
    "Aabb",
    "AssemblyBundle",
    "AssetMetadata",
    "GlbDocument",
    "ROOT_WRAPPER_NAME",
    "Rotation",
    "Transform",
    "Vec3",
    "apply_root_transform",
    "assemble",
    "box_mesh",
    "build_assembled_document",
    "compute_world_aabb",
    "document_from_mesh",
    "document_from_meshes",
    "grid_mesh",
    "icosphere_mesh",
    "longest_span",
    "parse_glb",
    "planar_uvs",
    "read_accessor",
    "read_bundle_extensions",
    "validate_document",
    "write_glb",
]
