"""Structural (non-baking) root transforms.

A transform is carried by a wrapper node above the former scene roots, so
user adjustments remain exactly reversible; vertex data is never rewritten.
"""

from __future__ import annotations

from .glb import GlbDocument
from .types import Transform

ROOT_WRAPPER_NAME = "craftpipe:root_transform"


def apply_root_transform(doc: GlbDocument, transform: Transform) -> GlbDocument:
    """Return a new document whose default scene is wrapped by `transform`."""
    tree = doc.copy_json()
    nodes = tree.setdefault("nodes", [])
    scene = tree["scenes"][doc.default_scene_index]
    wrapper = {
        "name": ROOT_WRAPPER_NAME,
        "translation": transform.translation.as_list(),
        "rotation": transform.rotation.as_list(),
        "scale": transform.scale.as_list(),
    }
    old_roots = scene.get("nodes", [])
    if old_roots:
        wrapper["children"] = list(old_roots)
    nodes.append(wrapper)
    scene["nodes"] = [len(nodes) - 1]
    return doc.with_json(tree)
