"""Time the numba loop kernels against the vectorised numpy kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--quick]

Each row reports the best-of-N wall time of both implementations on the
same input and checks that they return identical results. Without numba the
loop kernels run as plain Python, which is only useful as a sanity check.
"""
import argparse
import time

import numpy as np

from kalmanson import _accel, _kernels
from kalmanson.enumeration import TYPES_I, TYPES_III, _c1r_typeset_table, facets
from kalmanson.geometry import random_circular_metric
from kalmanson.splits import canonical_orderings_array, nontrivial_splits


def best_time(fn, args, repeat):
    fn(*args)  # warm-up; triggers compilation for the numba version
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    a, b = np.asarray(a), np.asarray(b)
    if a.ndim == 1 and a.dtype == np.uint64:
        return np.array_equal(np.sort(a), np.sort(b))
    return np.array_equal(a, b)


def cases(quick):
    rng = np.random.default_rng(1)
    n_tsp = 9 if quick else 10
    n_rec = 8 if quick else 9
    d_tsp = np.array(random_circular_metric(n_tsp, rng).array(), dtype=np.int64)
    d_rec = np.array(random_circular_metric(n_rec, rng).array(), dtype=np.int64)
    # scramble so the first passing ordering is far from the start
    order = rng.permutation(n_rec)
    d_rec = d_rec[np.ix_(order, order)]
    orders = canonical_orderings_array(n_rec)
    n_tri = 8 if quick else 9
    tri_masks = np.array([s.mask for s in nontrivial_splits(n_tri)], dtype=np.int64)
    facet = max(facets(7 if not quick else 6), key=lambda f: len(f.vertex_ids))
    bits = np.array([1 << v for v in sorted(facet.vertex_ids)], dtype=np.uint64)
    pool = np.array([s.mask for s in nontrivial_splits(10)], dtype=np.int64)
    arcs = np.array(sorted(s.mask for s in nontrivial_splits(10)
                           if bin(s.mask).count("1") == 2 and s.mask & (s.mask >> 1)), dtype=np.int64)
    big = np.ascontiguousarray(rng.choice(pool, size=40, replace=False))
    return [
        ("kalmanson_violation n=12", "kalmanson_violation",
         (np.array(random_circular_metric(12, rng).array(), dtype=np.int64), np.arange(12, dtype=np.int64))),
        (f"first_kalmanson_ordering n={n_rec}", "first_kalmanson_ordering", (d_rec, orders)),
        (f"tsp n={n_tsp}", "tsp", (d_tsp,)),
        (f"triangle_scan n={n_tri}", "triangle_scan", (tri_masks, n_tri, _c1r_typeset_table(), TYPES_I, TYPES_III)),
        (f"subset_masks |facet|={len(bits)}", "subset_masks", (bits,)),
        ("popcount 1e6", "popcount", (rng.integers(0, 2 ** 62, size=10 ** 6, dtype=np.uint64),)),
        ("weak_violation 40 splits", "weak_violation", (big, (1 << 10) - 1)),
        ("weak_violation adjacent pairs", "weak_violation", (arcs, (1 << 10) - 1)),
    ]


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--quick", action="store_true", help="smaller inputs")
    args = p.parse_args(argv)

    label = "numba" if _accel.HAVE_NUMBA else "loops (python)"
    print(f"backend in use: {_accel.BACKEND}")
    print(f"{'kernel':38s} {label:>14s} {'numpy':>12s} {'speed-up':>9s}  same")
    for title, name, kargs in cases(args.quick):
        t_loop, r_loop = best_time(_kernels.loop_kernels[name], kargs, args.repeat)
        t_np, r_np = best_time(_kernels.numpy_kernels[name], kargs, args.repeat)
        ratio = t_np / t_loop if t_loop > 0 else float("inf")
        print(f"{title:38s} {t_loop * 1e3:12.3f}ms {t_np * 1e3:10.3f}ms {ratio:8.1f}x  "
              f"{'yes' if same(r_loop, r_np) else 'NO'}")


if __name__ == "__main__":
    main()
