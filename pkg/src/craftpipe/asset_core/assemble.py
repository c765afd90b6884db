"""Consolidate model, transform, interaction points, behavior, and metadata
into one uploadable GLB.

The interaction and behavior modules build on asset_core types, so this
glue module imports them lazily to keep package initialization acyclic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import DuplicateKind, InvariantViolation
from .glb import GlbDocument, write_glb
from .transform import apply_root_transform
from .types import Transform


@dataclass(frozen=True)
class AssetMetadata:
    name: str = ""
    creator: str = ""
    source_image_digest: str = ""

    def to_json_obj(self) -> dict:
        return {
            "name": self.name,
            "creator": self.creator,
            "source_image_digest": self.source_image_digest,
        }


@dataclass(frozen=True)
class AssemblyBundle:
    """Everything the upload needs, in one immutable value.

    At most one interaction point per kind (the platform has exactly two
    interaction types); behavior may be a validated descriptor, an opaque
    raw script, or absent.
    """

    model: GlbDocument
    root_transform: Transform = field(default_factory=Transform.identity)
    interaction_points: tuple = ()
    behavior: object = None  # MotionDescriptor | RawScript | None
    metadata: AssetMetadata = field(default_factory=AssetMetadata)

    def __post_init__(self):
        from ..behavior import MotionDescriptor, RawScript

        kinds = [p.kind for p in self.interaction_points]
        if len(kinds) != len(set(kinds)):
            raise DuplicateKind("bundle has duplicate interaction point kinds")
        if self.behavior is not None and not isinstance(
            self.behavior, (MotionDescriptor, RawScript)
        ):
            raise InvariantViolation(
                f"behavior must be a MotionDescriptor or RawScript, got "
                f"{type(self.behavior).__name__}"
            )

    def point(self, kind):
        for p in self.interaction_points:
            if p.kind == kind:
                return p
        return None


def build_assembled_document(bundle: AssemblyBundle) -> GlbDocument:
    """The assembled document prior to serialization: root wrapper node plus
    vendor extensions and asset.extras metadata."""
    from ..behavior import BEHAVIOR_EXTENSION_NAME
    from ..interaction import (
        EXTENSION_NAME as INTERACTION_EXTENSION_NAME,
        encode_interaction_extension,
    )

    doc = apply_root_transform(bundle.model, bundle.root_transform)
    tree = doc.copy_json()

    used = set(tree.get("extensionsUsed", []))
    extensions = tree.setdefault("extensions", {})

    points_ext = encode_interaction_extension(bundle.interaction_points)
    if points_ext is not None:
        extensions[INTERACTION_EXTENSION_NAME] = points_ext
        used.add(INTERACTION_EXTENSION_NAME)

    if bundle.behavior is not None:
        extensions[BEHAVIOR_EXTENSION_NAME] = bundle.behavior.to_json_obj()
        used.add(BEHAVIOR_EXTENSION_NAME)

    if not extensions:
        del tree["extensions"]
    if used:
        tree["extensionsUsed"] = sorted(used)

    tree["asset"]["extras"] = bundle.metadata.to_json_obj()
    return doc.with_json(tree)


def assemble(bundle: AssemblyBundle, profile=None) -> bytes:
    """Serialize a bundle to a single GLB byte sequence.

    When a PlatformProfile is given, the assembled document is checked
    against it first; BudgetExceeded carries the violation list.
    """
    doc = build_assembled_document(bundle)
    if profile is not None:
        from ..mesh_budget import check  # local import: mesh_budget depends on us

        report = check(doc, profile)
        if not report.within_budget:
            from ..errors import BudgetExceeded

            raise BudgetExceeded(report.violations, report)
    return write_glb(doc)


def read_bundle_extensions(doc: GlbDocument):
    """Decode (interaction_points, behavior_json_obj, metadata_extras) from an
    assembled document; used by parse-back tests and the mock platform."""
    from ..behavior import BEHAVIOR_EXTENSION_NAME
    from ..interaction import (
        EXTENSION_NAME as INTERACTION_EXTENSION_NAME,
        decode_interaction_extension,
    )

    extensions = doc.json_tree.get("extensions", {})
    points = []
    if INTERACTION_EXTENSION_NAME in extensions:
        points = decode_interaction_extension(extensions[INTERACTION_EXTENSION_NAME])
    behavior_obj = extensions.get(BEHAVIOR_EXTENSION_NAME)
    extras = doc.json_tree.get("asset", {}).get("extras", {})
    return points, behavior_obj, extras
