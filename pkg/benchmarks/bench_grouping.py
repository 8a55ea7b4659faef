"""Benchmark the compiled grouping kernel against the numpy fallback.

Row grouping is the only hot loop in scoring: every visited property set
costs one group_ids pass over the cell matrix. This script times both
implementations on synthetic matrices across row counts, projection widths,
and value cardinalities, then on a search-shaped workload (many subset
projections over one matrix).

Run:  python3 benchmarks/bench_grouping.py [--quick]
"""

import argparse
import time

import numpy as np

from minkey._grouppy import group_ids as numpy_kernel

try:
    from minkey._groupfast import group_ids as compiled_kernel
except ImportError:
    compiled_kernel = None


def timed(fn, cells, cols, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        ids, n_groups = fn(cells, cols)
        best = min(best, time.perf_counter() - t0)
    return best, int(n_groups)


def bench_matrix(rows, width, cardinality, repeat):
    rng = np.random.default_rng(rows * 7 + width)
    cells = rng.integers(0, cardinality, size=(rows, width), dtype=np.int32)
    cols = np.arange(width, dtype=np.int64)
    t_np, n_np = timed(numpy_kernel, cells, cols, repeat)
    if compiled_kernel is None:
        return t_np, None, n_np
    t_c, n_c = timed(compiled_kernel, cells, cols, repeat)
    assert n_np == n_c, "kernels disagree on group count"
    return t_np, t_c, n_np


def bench_search_shape(rows, n_props, subsets, repeat):
    """Score-like workload: many small projections of one wide matrix."""
    rng = np.random.default_rng(99)
    cells = rng.integers(0, 64, size=(rows, n_props), dtype=np.int32)
    projections = [np.sort(rng.choice(n_props, size=rng.integers(1, 4),
                                      replace=False)).astype(np.int64)
                   for _ in range(subsets)]

    def run(kernel):
        best = float("inf")
        for _ in range(repeat):
            t0 = time.perf_counter()
            for cols in projections:
                kernel(cells, cols)
            best = min(best, time.perf_counter() - t0)
        return best

    t_np = run(numpy_kernel)
    t_c = run(compiled_kernel) if compiled_kernel is not None else None
    return t_np, t_c


def fmt(seconds):
    return f"{seconds * 1e3:9.3f} ms"


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--quick", action="store_true",
                        help="smaller matrices, fewer repeats")
    args = parser.parse_args()

    repeat = 3 if args.quick else 7
    sizes = [10_000, 100_000] if args.quick else [10_000, 100_000, 1_000_000]

    if compiled_kernel is None:
        print("compiled extension not built; showing numpy fallback only\n")

    print(f"{'rows':>9}  {'width':>5}  {'card':>7}  {'numpy':>12}  "
          f"{'compiled':>12}  {'speedup':>7}")
    for rows in sizes:
        for width in (1, 2, 4):
            for cardinality in (8, 1024, rows):
                t_np, t_c, _ = bench_matrix(rows, width, cardinality, repeat)
                if t_c is None:
                    print(f"{rows:>9}  {width:>5}  {cardinality:>7}  {fmt(t_np)}")
                else:
                    print(f"{rows:>9}  {width:>5}  {cardinality:>7}  {fmt(t_np)}  "
                          f"{fmt(t_c)}  {t_np / t_c:6.1f}x")

    rows = 20_000 if args.quick else 100_000
    t_np, t_c = bench_search_shape(rows, n_props=50, subsets=60, repeat=repeat)
    print(f"\nsearch-shaped workload ({rows} rows, 60 projections of <=3 of "
          f"50 columns):")
    if t_c is None:
        print(f"  numpy    {fmt(t_np)}")
    else:
        print(f"  numpy    {fmt(t_np)}\n  compiled {fmt(t_c)}  "
              f"({t_np / t_c:.1f}x)")


if __name__ == "__main__":
    main()
