"""Benchmark the compiled reduction kernel against the pure-Python fallback.

Builds one Rips filtration, extracts its boundary matrix once, then times
``reduce_boundary`` from both backends on identical input and checks that
they agree. Run from the repository root:

    python benchmarks/bench_reduction.py [--points 40] [--max-dim 2] [--repeats 3]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from ripscale import _reduction_py
from ripscale.geometry import distance_matrix, generate_random_cloud
from ripscale.persistence import boundary_columns
from ripscale.rips import build_rips

try:
    from ripscale import _reduction as _reduction_cy
except ImportError:
    _reduction_cy = None


def _time(fn, col_ptr, rows, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(col_ptr, rows)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=40)
    parser.add_argument("--max-dim", type=int, default=2)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    cloud = generate_random_cloud(args.points, 3, args.seed)
    fc = build_rips(distance_matrix(cloud), args.max_dim)
    col_ptr, rows = boundary_columns(fc)
    n_simplices = len(fc.simplices)
    print(
        f"{args.points} points, max_dim {args.max_dim}: "
        f"{n_simplices} simplices, {len(rows)} boundary entries"
    )

    t_py = _time(_reduction_py.reduce_boundary, col_ptr, rows, args.repeats)
    print(f"python backend: {t_py * 1e3:10.2f} ms")
    if _reduction_cy is None:
        print("cython backend: not built (pip install -e . compiles it)")
        return 0
    t_cy = _time(_reduction_cy.reduce_boundary, col_ptr, rows, args.repeats)
    print(f"cython backend: {t_cy * 1e3:10.2f} ms")
    print(f"speedup: {t_py / t_cy:.1f}x")

    same = np.array_equal(
        _reduction_py.reduce_boundary(col_ptr, rows),
        _reduction_cy.reduce_boundary(col_ptr, rows),
    )
    print(f"outputs identical: {same}")
    return 0 if same else 1


if __name__ == "__main__":
    raise SystemExit(main())
