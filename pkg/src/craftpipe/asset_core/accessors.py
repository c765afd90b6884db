"""Typed reads of accessor data out of the binary payload.

Geometry decoding is deliberately narrow: float32 vertex attributes and
uint8/uint16/uint32 indices. Anything else is preserved opaquely in the
JSON tree but is not decodable here.
"""

from __future__ import annotations

import numpy as np

from ..errors import UnsupportedFeature
from .glb import COMPONENT_BYTE_SIZE, TYPE_COMPONENT_COUNT, GlbDocument

_DTYPES = {
    5120: np.int8,
    5121: np.uint8,
    5122: np.int16,
    5123: np.uint16,
    5125: np.uint32,
    5126: np.float32,
}


def read_accessor(doc: GlbDocument, index: int) -> np.ndarray:
    """Decode accessor `index` into an (count, components) or (count,) array."""
    acc = doc.accessors[index]
    dtype = _DTYPES.get(acc.get("componentType"))
    if dtype is None:
        raise UnsupportedFeature(
            f"accessors[{index}] componentType {acc.get('componentType')!r}"
        )
    n_comp = TYPE_COMPONENT_COUNT[acc["type"]]
    count = acc.get("count", 0)
    if count == 0:
        shape = (0,) if n_comp == 1 else (0, n_comp)
        return np.empty(shape, dtype=dtype)

    if "bufferView" not in acc:
        shape = (count,) if n_comp == 1 else (count, n_comp)
        return np.zeros(shape, dtype=dtype)

    view = doc.buffer_views[acc["bufferView"]]
    elem = COMPONENT_BYTE_SIZE[acc["componentType"]] * n_comp
    stride = view.get("byteStride", elem)
    start = view.get("byteOffset", 0) + acc.get("byteOffset", 0)

    if stride == elem:
        raw = np.frombuffer(doc.binary, dtype=dtype, count=count * n_comp, offset=start)
    else:
        # interleaved: gather each element through a strided byte view
        window = doc.binary[start : start + (count - 1) * stride + elem]
        byte_rows = np.lib.stride_tricks.as_strided(
            np.frombuffer(window, dtype=np.uint8),
            shape=(count, elem),
            strides=(stride, 1),
        )
        raw = byte_rows.reshape(-1).view(dtype) if byte_rows.flags.c_contiguous else \
            np.ascontiguousarray(byte_rows).reshape(-1).view(dtype)

    out = raw.reshape(count) if n_comp == 1 else raw.reshape(count, n_comp)
    return out.copy()


def is_float_vec(doc: GlbDocument, index: int, n_comp: int) -> bool:
    acc = doc.accessors[index]
    return (
        acc.get("componentType") == 5126
        and TYPE_COMPONENT_COUNT.get(acc.get("type")) == n_comp
    )


def is_index_type(doc: GlbDocument, index: int) -> bool:
    acc = doc.accessors[index]
    return acc.get("componentType") in (5121, 5123, 5125) and acc.get("type") == "SCALAR"
