"""Hot numeric kernels.

Every kernel exists twice: a loop version compiled with numba when it is
available, and a vectorised numpy version. The public names at the bottom of
the module are bound to one or the other according to ``_accel.BACKEND``.
Both versions must return identical results (including tie-breaking), which
``tests/test_kernels.py`` checks directly.

All integer inputs are int64 except face masks, which are uint64.
"""
from functools import lru_cache
from itertools import combinations, islice, permutations

import numpy as np

from ._accel import BACKEND, HAVE_NUMBA, njit

_NO_HIT4 = (-1, -1, -1, -1)


# --------------------------------------------------------------------------
# Kalmanson quadruple scan
# --------------------------------------------------------------------------

@njit
def _kalmanson_violation_loops(d, order):
    n = order.shape[0]
    out = np.full(4, -1, np.int64)
    for i in range(n - 3):
        oi = order[i]
        for j in range(i + 1, n - 2):
            oj = order[j]
            for k in range(j + 1, n - 1):
                ok = order[k]
                for l in range(k + 1, n):
                    ol = order[l]
                    rhs = d[oi, ok] + d[oj, ol]
                    if d[oi, oj] + d[ok, ol] > rhs or d[oi, ol] + d[oj, ok] > rhs:
                        out[0] = i
                        out[1] = j
                        out[2] = k
                        out[3] = l
                        return out
    return out


@njit
def _first_kalmanson_ordering_loops(d, orders):
    for r in range(orders.shape[0]):
        if _kalmanson_violation_loops(d, orders[r])[0] < 0:
            return r
    return -1


@lru_cache(maxsize=None)
def quadruples(n):
    """All position quadruples i<j<k<l, lexicographic, as an (C(n,4), 4) array."""
    q = np.array(list(combinations(range(n), 4)), dtype=np.int64)
    return q.reshape(-1, 4)


def _violations_numpy(d, elems):
    # elems[..., 4] holds the elements at positions i<j<k<l
    i, j, k, l = (elems[..., t] for t in range(4))
    rhs = d[i, k] + d[j, l]
    return (d[i, j] + d[k, l] > rhs) | (d[i, l] + d[j, k] > rhs)


def _kalmanson_violation_numpy(d, order):
    q = quadruples(order.shape[0])
    if q.shape[0] == 0:
        return np.full(4, -1, np.int64)
    bad = np.flatnonzero(_violations_numpy(d, order[q]))
    if bad.size == 0:
        return np.full(4, -1, np.int64)
    return q[bad[0]].copy()


def _first_kalmanson_ordering_numpy(d, orders, chunk=2048):
    q = quadruples(orders.shape[1])
    if q.shape[0] == 0:
        return 0 if orders.shape[0] else -1
    for start in range(0, orders.shape[0], chunk):
        block = orders[start:start + chunk]
        ok = ~_violations_numpy(d, block[:, q]).any(axis=1)
        hit = np.flatnonzero(ok)
        if hit.size:
            return start + int(hit[0])
    return -1


# --------------------------------------------------------------------------
# Brute-force TSP over canonical tours (element 0 first, second < last)
# --------------------------------------------------------------------------

@njit
def _tsp_loops(d):
    n = d.shape[0]
    perm = np.arange(1, n)
    best_perm = perm.copy()
    m = n - 1
    best = 0
    found = False
    while True:
        if perm[0] < perm[m - 1]:
            length = d[0, perm[0]] + d[perm[m - 1], 0]
            for t in range(m - 1):
                length += d[perm[t], perm[t + 1]]
            if not found or length < best:
                best = length
                best_perm[:] = perm
                found = True
        i = m - 2
        while i >= 0 and perm[i] >= perm[i + 1]:
            i -= 1
        if i < 0:
            break
        j = m - 1
        while perm[j] <= perm[i]:
            j -= 1
        tmp = perm[i]
        perm[i] = perm[j]
        perm[j] = tmp
        lo = i + 1
        hi = m - 1
        while lo < hi:
            tmp = perm[lo]
            perm[lo] = perm[hi]
            perm[hi] = tmp
            lo += 1
            hi -= 1
    return best, best_perm


def _tsp_numpy(d, chunk=65536):
    n = d.shape[0]
    it = permutations(range(1, n))
    best = None
    best_perm = None
    while True:
        rows = list(islice(it, chunk))
        if not rows:
            break
        p = np.array(rows, dtype=np.int64)
        p = p[p[:, 0] < p[:, -1]]
        if p.shape[0] == 0:
            continue
        lengths = d[0, p[:, 0]] + d[p[:, -1], 0] + d[p[:, :-1], p[:, 1:]].sum(axis=1)
        r = int(np.argmin(lengths))
        if best is None or lengths[r] < best:
            best = lengths[r]
            best_perm = p[r].copy()
    return best, best_perm


# --------------------------------------------------------------------------
# Face masks: all nonempty subsets of a facet, and popcounts
# --------------------------------------------------------------------------

@njit
def _subset_masks_loops(bits):
    d = bits.shape[0]
    out = np.zeros(1 << d, np.uint64)
    size = 1
    for b in range(d):
        bit = bits[b]
        for s in range(size):
            out[size + s] = out[s] | bit
        size *= 2
    return out[1:]


def _subset_masks_numpy(bits):
    out = np.zeros(1, np.uint64)
    for bit in bits:
        out = np.concatenate((out, out | np.uint64(bit)))
    return out[1:]


@njit
def _popcount_loops(masks):
    out = np.empty(masks.shape[0], np.int64)
    one = np.uint64(1)
    for r in range(masks.shape[0]):
        x = masks[r]
        c = 0
        while x:
            x &= x - one
            c += 1
        out[r] = c
    return out


_BYTE_POP = np.array([bin(b).count("1") for b in range(256)], dtype=np.int64)


def _popcount_numpy(masks):
    masks = np.ascontiguousarray(masks, dtype=np.uint64)
    return _BYTE_POP[masks.view(np.uint8).reshape(-1, 8)].sum(axis=1)


# --------------------------------------------------------------------------
# Triangle scan: every 3-subset of splits, classified by its column types
# --------------------------------------------------------------------------
#
# A column of a 3-row matrix has a type in 0..7 (bit r set iff row r has a
# one). ``lut[typeset]`` says whether a matrix whose distinct column types
# are exactly ``typeset`` is C1R; duplicate columns never change that.

@njit
def _triangle_scan_loops(masks, n, lut, i_types, iii_types):
    f0 = masks.shape[0]
    table = np.zeros((4, 5), np.int64)
    for a in range(f0):
        ma = masks[a]
        for b in range(a + 1, f0):
            mb = masks[b]
            for c in range(b + 1, f0):
                mc = masks[c]
                ts = 0
                for col in range(n):
                    t = ((ma >> col) & 1) | (((mb >> col) & 1) << 1) | (((mc >> col) & 1) << 2)
                    ts |= 1 << t
                if lut[ts]:
                    ci = 0
                    x = ts & i_types
                    while x:
                        x &= x - 1
                        ci += 1
                    cj = 0
                    x = ts & iii_types
                    while x:
                        x &= x - 1
                        cj += 1
                    table[ci, cj] += 1
    return table


def _triangle_scan_numpy(masks, n, lut, i_types, iii_types):
    f0 = masks.shape[0]
    table = np.zeros((4, 5), np.int64)
    cols = np.arange(n, dtype=np.int64)
    bits = (masks[:, None] >> cols) & 1  # (f0, n)
    for a in range(f0):
        for b in range(a + 1, f0 - 1):
            base = bits[a] | (bits[b] << 1)  # (n,)
            t = base[None, :] | (bits[b + 1:] << 2)  # (rest, n)
            ts = np.bitwise_or.reduce(np.left_shift(1, t), axis=1)
            ok = lut[ts].astype(bool)
            if not ok.any():
                continue
            ts = ts[ok]
            ci = _BYTE_POP[ts & i_types]
            cj = _BYTE_POP[ts & iii_types]
            np.add.at(table, (ci, cj), 1)
    return table


# --------------------------------------------------------------------------
# Weak compatibility: first offending triple of bipartitions
# --------------------------------------------------------------------------

@njit
def _weak_violation_loops(masks, full):
    k = masks.shape[0]
    out = np.full(4, -1, np.int64)
    for i in range(k):
        for j in range(i + 1, k):
            for l in range(j + 1, k):
                for o in range(8):
                    a1 = masks[i] if (o & 1) == 0 else full ^ masks[i]
                    a2 = masks[j] if (o & 2) == 0 else full ^ masks[j]
                    a3 = masks[l] if (o & 4) == 0 else full ^ masks[l]
                    if (a1 & a2 & a3) != 0 and (a1 & ~a2 & ~a3) != 0 \
                            and (a2 & ~a1 & ~a3) != 0 and (a3 & ~a1 & ~a2) != 0:
                        out[0] = i
                        out[1] = j
                        out[2] = l
                        out[3] = o
                        return out
    return out


_ORIENT = np.array([[(o >> b) & 1 for b in range(3)] for o in range(8)], dtype=bool)


def _weak_violation_numpy(masks, full):
    k = masks.shape[0]
    for i in range(k):
        a1 = np.where(_ORIENT[:, 0], full ^ masks[i], masks[i])[:, None]
        for j in range(i + 1, k - 1):
            a2 = np.where(_ORIENT[:, 1], full ^ masks[j], masks[j])[:, None]
            rest = masks[j + 1:][None, :]
            a3 = np.where(_ORIENT[:, 2:3], full ^ rest, rest)  # (8, L)
            bad = ((a1 & a2 & a3) != 0) & ((a1 & ~a2 & ~a3) != 0) \
                & ((a2 & ~a1 & ~a3) != 0) & ((a3 & ~a1 & ~a2) != 0)
            cols = np.flatnonzero(bad.any(axis=0))
            if cols.size:
                l = int(cols[0])
                o = int(np.flatnonzero(bad[:, l])[0])
                return np.array([i, j, j + 1 + l, o], dtype=np.int64)
    return np.full(4, -1, np.int64)


# --------------------------------------------------------------------------

numpy_kernels = {
    "kalmanson_violation": _kalmanson_violation_numpy,
    "first_kalmanson_ordering": _first_kalmanson_ordering_numpy,
    "tsp": _tsp_numpy,
    "subset_masks": _subset_masks_numpy,
    "popcount": _popcount_numpy,
    "triangle_scan": _triangle_scan_numpy,
    "weak_violation": _weak_violation_numpy,
}

# Without numba these are plain-Python loops: correct, but only useful for
# cross-checking the numpy versions.
loop_kernels = {
    "kalmanson_violation": _kalmanson_violation_loops,
    "first_kalmanson_ordering": _first_kalmanson_ordering_loops,
    "tsp": _tsp_loops,
    "subset_masks": _subset_masks_loops,
    "popcount": _popcount_loops,
    "triangle_scan": _triangle_scan_loops,
    "weak_violation": _weak_violation_loops,
}

active_kernels = loop_kernels if HAVE_NUMBA else numpy_kernels

kalmanson_violation = active_kernels["kalmanson_violation"]
first_kalmanson_ordering = active_kernels["first_kalmanson_ordering"]
tsp = active_kernels["tsp"]
subset_masks = active_kernels["subset_masks"]
popcount = active_kernels["popcount"]
triangle_scan = active_kernels["triangle_scan"]
weak_violation = active_kernels["weak_violation"]

__all__ = ["BACKEND", "numpy_kernels", "loop_kernels", "active_kernels"]
