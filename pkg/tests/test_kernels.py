"""The numba loop kernels and the numpy kernels must agree exactly,
including which witness they report first."""
import os
import subprocess
import sys
import textwrap

import numpy as np
import pytest

from kalmanson import _accel, _kernels
from kalmanson.enumeration import TYPES_I, TYPES_III, _c1r_typeset_table
from kalmanson.splits import canonical_orderings_array, nontrivial_splits

from oracles import kalmanson_violation_oracle, tsp_oracle

NP, LOOP = _kernels.numpy_kernels, _kernels.loop_kernels


def random_symmetric(rng, n, hi=10):
    a = np.zeros((n, n), dtype=np.int64)
    iu = np.triu_indices(n, 1)
    a[iu] = rng.integers(0, hi, size=len(iu[0]))
    return a + a.T


def circular_int_metric(rng, n):
    order = rng.permutation(n)
    a = np.zeros((n, n), dtype=np.int64)
    for start in range(n):
        for length in range(1, n):
            if rng.random() < 0.5:
                block = order[[(start + t) % n for t in range(length)]]
                inside = np.zeros(n, dtype=bool)
                inside[block] = True
                a += rng.integers(1, 5) * (inside[:, None] ^ inside[None, :])
    return a


def test_same_kernel_names():
    assert set(NP) == set(LOOP) == set(_kernels.active_kernels)


def test_backend_flag_matches_import():
    assert _accel.BACKEND == ("numba" if _accel.HAVE_NUMBA else "numpy")


@pytest.mark.parametrize("n", [4, 5, 6, 8, 10])
def test_kalmanson_violation(kernels, rng, n):
    for _ in range(60):
        d = circular_int_metric(rng, n) if rng.random() < 0.5 else random_symmetric(rng, n)
        order = rng.permutation(n).astype(np.int64)
        hit = tuple(int(x) for x in kernels["kalmanson_violation"](d, order))
        expected = kalmanson_violation_oracle(d.tolist(), [int(x) + 1 for x in order])
        assert hit == (expected if expected is not None else (-1, -1, -1, -1))


@pytest.mark.parametrize("n", [5, 6, 7])
def test_first_kalmanson_ordering(rng, n):
    orders = canonical_orderings_array(n)
    for _ in range(20):
        d = circular_int_metric(rng, n) if rng.random() < 0.7 else random_symmetric(rng, n)
        a = NP["first_kalmanson_ordering"](d, orders)
        b = LOOP["first_kalmanson_ordering"](d, orders)
        assert a == b
        if a >= 0:
            assert kalmanson_violation_oracle(d.tolist(), [int(x) + 1 for x in orders[a]]) is None


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7, 8])
def test_tsp(rng, n):
    for _ in range(10):
        d = random_symmetric(rng, n, hi=4)  # small range forces ties
        la, pa = NP["tsp"](d)
        lb, pb = LOOP["tsp"](d)
        assert la == lb and list(pa) == list(pb)
        if n <= 7:
            assert la == tsp_oracle(d.tolist())


def test_subset_masks(kernels):
    bits = np.array([1 << v for v in (0, 3, 5, 9, 40)], dtype=np.uint64)
    out = kernels["subset_masks"](bits)
    assert out.dtype == np.uint64
    assert len(out) == 31 and len(set(out.tolist())) == 31
    assert np.array_equal(np.sort(NP["subset_masks"](bits)), np.sort(LOOP["subset_masks"](bits)))


def test_popcount(kernels, rng):
    masks = rng.integers(0, 2 ** 63, size=500, dtype=np.uint64) | np.uint64(1 << 63)
    expected = [bin(int(x)).count("1") for x in masks]
    assert kernels["popcount"](masks).tolist() == expected


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_triangle_scan(n):
    masks = np.array([s.mask for s in nontrivial_splits(n)], dtype=np.int64)
    lut = _c1r_typeset_table()
    a = NP["triangle_scan"](masks, n, lut, TYPES_I, TYPES_III)
    b = LOOP["triangle_scan"](masks, n, lut, TYPES_I, TYPES_III)
    assert np.array_equal(a, b)


def test_weak_violation(rng):
    n = 7
    full = (1 << n) - 1
    pool = np.array([s.mask for s in nontrivial_splits(n)], dtype=np.int64)
    hits = 0
    for _ in range(300):
        masks = rng.choice(pool, size=int(rng.integers(3, 8)), replace=False)
        a = NP["weak_violation"](masks, full)
        b = LOOP["weak_violation"](masks, full)
        assert a.tolist() == b.tolist()
        hits += a[0] >= 0
    assert 0 < hits < 300


def test_numpy_fallback_in_subprocess():
    code = textwrap.dedent("""
        import numpy as np
        from kalmanson import _accel, triangles_bruteforce, tsp_bruteforce, is_circular, SplitSystem
        assert _accel.BACKEND == "numpy", _accel.BACKEND
        assert triangles_bruteforce(6)[0] == 1755
        d = np.array([[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]])
        assert tsp_bruteforce(d).length == 4
        assert is_circular(SplitSystem.from_blocks(5, [[1, 2], [1, 3], [1, 4]]))[0] is False
        print("ok")
    """)
    env = dict(os.environ, KALMANSON_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, timeout=300)
    assert out.returncode == 0, out.stderr
    assert out.stdout.strip() == "ok"
