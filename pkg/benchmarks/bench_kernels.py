"""Benchmark the compiled polyline-distance kernel against the pure-Python
fallback.

Usage: python3 benchmarks/bench_kernels.py [--points N] [--queries N]
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from swarmsteer._polyline_py import polyline_signed_distance as py_kernel
from swarmsteer.kernels import KERNEL_BACKEND

try:
    from swarmsteer._polyline_c import polyline_signed_distance as c_kernel
except ImportError:
    c_kernel = None


def make_polyline(n: int, closed: bool, rng: np.random.Generator) -> np.ndarray:
    t = np.linspace(0.0, 2.0 * np.pi, n, endpoint=not closed)
    r = 200.0 + rng.uniform(-30.0, 30.0, size=n)
    return np.column_stack([r * np.cos(t), r * np.sin(t)])


def bench(kernel, pts: np.ndarray, closed: bool, queries: np.ndarray) -> float:
    def run():
        for q in queries:
            kernel(pts, closed, q)

    number = max(1, 3 if kernel is py_kernel else 30)
    return min(timeit.repeat(run, number=number, repeat=3)) / (number * len(queries))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=256, help="polyline vertex count")
    ap.add_argument("--queries", type=int, default=2000, help="query points per pass")
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    queries = rng.uniform(-400.0, 400.0, size=(args.queries, 2))

    print(f"active backend: {KERNEL_BACKEND}")
    print(f"{args.points}-vertex polyline, {args.queries} queries, best of 3\n")
    print(f"{'case':<16}{'python':>14}{'compiled':>14}{'speedup':>10}")
    for closed in (False, True):
        pts = make_polyline(args.points, closed, rng)
        t_py = bench(py_kernel, pts, closed, queries)
        row = f"{'closed' if closed else 'open':<16}{t_py * 1e6:>12.2f}us"
        if c_kernel is not None:
            t_c = bench(c_kernel, pts, closed, queries)
            row += f"{t_c * 1e6:>12.2f}us{t_py / t_c:>9.1f}x"
            worst = max(
                abs(py_kernel(pts, closed, q) - c_kernel(pts, closed, q)) for q in queries[:200]
            )
            assert worst < 1e-9, f"backends disagree by {worst}"
        else:
            row += f"{'n/a':>14}{'n/a':>10}"
        print(row)


if __name__ == "__main__":
    main()
