"""Benchmark: compiled vs pure-Python decimation kernel.

    python benchmarks/bench_decimate.py [--repeats N]

Decimates icospheres of increasing density to a quarter of their triangles
with both kernels, verifies the outputs are identical, and prints timings.
"""

import argparse
import time

import numpy as np

from craftpipe import asset_core as ac
from craftpipe.mesh_budget import _qem_py

try:
    from craftpipe.mesh_budget import _qem_cy
except ImportError:
    _qem_cy = None


def bench(kernel, pos, faces, target, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        started = time.perf_counter()
        result = kernel.decimate_arrays(pos, faces, target)
        best = min(best, time.perf_counter() - started)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if _qem_cy is None:
        print("compiled kernel not built (pip install -e . with Cython + a C compiler)")

    print(f"{'mesh':<14}{'tris':>8}{'target':>8}{'pure (ms)':>12}"
          f"{'cython (ms)':>13}{'speedup':>9}  identical")
    for sub in (2, 3, 4, 5):
        positions, indices = ac.icosphere_mesh(sub)
        pos = positions.reshape(-1).tolist()
        faces = indices.reshape(-1).astype(np.int64).tolist()
        tris = len(indices)
        target = max(4, tris // 4)

        t_py, r_py = bench(_qem_py, pos, faces, target, args.repeats)
        row = f"{'icosphere-' + str(sub):<14}{tris:>8}{target:>8}{t_py * 1e3:>12.1f}"
        if _qem_cy is not None:
            t_cy, r_cy = bench(_qem_cy, pos, faces, target, args.repeats)
            row += f"{t_cy * 1e3:>13.1f}{t_py / t_cy:>8.1f}x  {r_py == r_cy}"
        print(row)


if __name__ == "__main__":
    main()
