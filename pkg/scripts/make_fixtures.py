"""Regenerate the committed mock-provider fixtures.

Run from the repo root after changing fixture geometry or imagery:

    python scripts/make_fixtures.py

Outputs PNG images, unit-scale GLB models, and the checksum manifest under
src/craftpipe/gen_providers/fixtures/. The files are committed; runtime code
only reads them.
"""

import hashlib
import json
import struct
import zlib
from pathlib import Path

import numpy as np

from craftpipe import asset_core as ac

ROOT = Path(__file__).resolve().parents[1] / "src/craftpipe/gen_providers/fixtures"

IMAGE_SIZE = 1024


def write_png(path: Path, paint):
    """Minimal RGB PNG writer; `paint(x, y) -> (r, g, b)`."""
    raw = bytearray()
    for y in range(IMAGE_SIZE):
        raw.append(0)  # filter: none
        for x in range(IMAGE_SIZE):
            raw.extend(paint(x, y))

    def chunk(tag, data):
        body = tag + data
        return struct.pack(">I", len(data)) + body + struct.pack(
            ">I", zlib.crc32(body)
        )

    ihdr = struct.pack(">IIBBBBB", IMAGE_SIZE, IMAGE_SIZE, 8, 2, 0, 0, 0)
    png = (
        b"\x89PNG\r\n\x1a\n"
        + chunk(b"IHDR", ihdr)
        + chunk(b"IDAT", zlib.compress(bytes(raw), 9))
        + chunk(b"IEND", b"")
    )
    path.write_bytes(png)


def band_painter(base, accent, stripe_every):
    def paint(x, y):
        if (x // stripe_every + y // stripe_every) % 2 == 0:
            return base
        return accent

    return paint


def merged_boxes(parts):
    """Combine (size, center) boxes into one positions/indices mesh."""
    positions = []
    indices = []
    offset = 0
    for size, center in parts:
        p, f = ac.box_mesh(size=size, center=center)
        positions.append(p)
        indices.append(f + offset)
        offset += len(p)
    return np.vstack(positions), np.vstack(indices)


def build_models():
    models = {}

    cube_p, cube_f = ac.box_mesh(size=(1.0, 1.0, 1.0), center=(0.0, 0.5, 0.0))
    models["cube"] = (cube_p, cube_f, [0.72, 0.72, 0.75, 1.0])

    leg = 0.06
    chair_parts = [
        ((leg, 0.42, leg), (-0.38, 0.21, -0.38)),
        ((leg, 0.42, leg), (0.38, 0.21, -0.38)),
        ((leg, 0.42, leg), (-0.38, 0.21, 0.38)),
        ((leg, 0.42, leg), (0.38, 0.21, 0.38)),
        ((0.86, 0.08, 0.86), (0.0, 0.46, 0.0)),
        ((0.86, 0.50, 0.07), (0.0, 0.75, -0.395)),
    ]
    p, f = merged_boxes(chair_parts)
    models["chair"] = (p, f, [0.55, 0.36, 0.18, 1.0])

    drill_parts = [
        ((0.55, 0.2, 0.18), (-0.07, 0.42, 0.0)),  # body
        ((0.4, 0.05, 0.05), (0.3, 0.42, 0.0)),  # bit
        ((0.09, 0.32, 0.14), (-0.2, 0.16, 0.0)),  # grip
        ((0.16, 0.07, 0.14), (-0.2, 0.035, 0.0)),  # battery foot
    ]
    p, f = merged_boxes(drill_parts)
    models["drill"] = (p, f, [0.85, 0.55, 0.1, 1.0])

    airplane_parts = [
        ((0.16, 0.16, 1.0), (0.0, 0.3, 0.0)),  # fuselage
        ((0.9, 0.04, 0.24), (0.0, 0.32, 0.1)),  # main wings
        ((0.36, 0.04, 0.14), (0.0, 0.36, -0.42)),  # tail wings
        ((0.03, 0.2, 0.14), (0.0, 0.46, -0.42)),  # tail fin
    ]
    p, f = merged_boxes(airplane_parts)
    models["airplane"] = (p, f, [0.78, 0.1, 0.12, 1.0])

    return models


IMAGES = {
    "chair": ((150, 96, 48), (114, 70, 32), 128),
    "drill": ((230, 150, 30), (40, 40, 46), 64),
    "airplane": ((200, 30, 36), (235, 235, 240), 256),
    "clock": ((240, 240, 235), (30, 60, 140), 96),
    "cube": ((120, 120, 128), (90, 90, 96), 512),
}

BINDINGS = {
    "chair": {"model": "chair", "size_reply": "The chair is about 90 cm tall."},
    "drill": {"model": "drill", "size_reply": "Roughly 25 cm long."},
    "airplane": {
        "model": "airplane",
        "size_reply": "About 1.2 meters from nose to tail.",
    },
    "clock": {"model": "cube", "size_reply": "Approximately 12 cm across."},
    "cube": {"model": "cube", "size_reply": "Looks like 1 m on each side."},
}


def sha256_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def main():
    (ROOT / "images").mkdir(parents=True, exist_ok=True)
    (ROOT / "models").mkdir(parents=True, exist_ok=True)

    manifest = {"images": {}, "models": {}, "bindings": BINDINGS}

    for name, (base, accent, stripe) in IMAGES.items():
        path = ROOT / "images" / f"{name}.png"
        write_png(path, band_painter(base, accent, stripe))
        manifest["images"][name] = {
            "file": f"images/{name}.png",
            "sha256": sha256_file(path),
        }
        print(f"image {name}: {path.stat().st_size} bytes")

    for name, (positions, indices, color) in build_models().items():
        doc = ac.document_from_mesh(
            positions,
            indices,
            uvs=ac.planar_uvs(positions),
            base_color=color,
            name=name,
            generator="craftpipe-fixture",
        )
        path = ROOT / "models" / f"{name}.glb"
        path.write_bytes(ac.write_glb(doc))
        aabb = ac.compute_world_aabb(doc)
        manifest["models"][name] = {
            "file": f"models/{name}.glb",
            "sha256": sha256_file(path),
        }
        print(
            f"model {name}: {path.stat().st_size} bytes, "
            f"span {ac.longest_span(aabb):.3f} m"
        )

    (ROOT / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print("manifest written")


if __name__ == "__main__":
    main()
