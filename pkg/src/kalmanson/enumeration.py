"""Face counts of the complex of circular split systems.

Vertices are the non-trivial splits of {1..n}, numbered in the order of
:func:`kalmanson.splits.nontrivial_splits`; facets are the arc sets of the
(n-1)!/2 circular orderings.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Optional

import numpy as np

from . import _kernels
from .consecutive_ones import is_c1r
from .splits import CircularOrdering, canonical_orderings, nontrivial_splits

FACETS_MAX_N = 9
BRUTE_MAX_N = 7
TRIANGLES_BRUTE_MAX_N = 9


def _guard(n, hi, what):
    if not 4 <= n <= hi:
        raise ValueError(f"{what} needs 4 <= n <= {hi}, got n={n}")


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    """Stirling numbers of the second kind."""
    if n < 0 or k < 0:
        raise ValueError("stirling2 needs n, k >= 0")
    if n == k:
        return 1
    if n == 0 or k == 0:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def surjections(n: int, k: int) -> int:
    """Number of surjections from an n-set onto a k-set, ``k! S(n, k)``."""
    return factorial(k) * stirling2(n, k)


def face_dimension(n: int) -> int:
    """Vertices per facet, n(n-3)/2; the f-vector has this many entries."""
    return n * (n - 3) // 2


@dataclass(frozen=True)
class FVector:
    """``counts[k]`` is the number of faces with k+1 vertices; None if unknown."""

    n: int
    counts: tuple

    @property
    def d(self) -> int:
        return len(self.counts)

    def __str__(self):
        return "<" + ",".join("?" if c is None else str(c) for c in self.counts) + ">"


@dataclass(frozen=True)
class Facet:
    ordering: CircularOrdering
    vertex_ids: frozenset


@dataclass(frozen=True)
class FijTable:
    """Circular 3-split systems bucketed by how many column types of each
    forbidden 3-row configuration they contain."""

    n: int
    counts: dict

    @property
    def total(self) -> int:
        return sum(self.counts.values())


@lru_cache(maxsize=None)
def _vertex_index(n: int) -> dict:
    return {s.mask: i for i, s in enumerate(nontrivial_splits(n))}


def _arc_masks(order: tuple) -> set:
    n = len(order)
    full = (1 << n) - 1
    out = set()
    for start in range(n):
        m = 0
        for length in range(1, n - 1):
            m |= 1 << (order[(start + length - 1) % n] - 1)
            if length >= 2:
                out.add(m ^ full if m & 1 else m)
    return out


def facets(n: int) -> list:
    """One facet per canonical circular ordering, in lexicographic order."""
    _guard(n, FACETS_MAX_N, "facets")
    index = _vertex_index(n)
    return [Facet(CircularOrdering(order), frozenset(index[m] for m in _arc_masks(order)))
            for order in canonical_orderings(n)]


def fvector_bruteforce(n: int, batch: int = 64) -> FVector:
    """Enumerate every face as a subset of some facet and count distinct ones.

    Faces are bitmasks over vertex ids (f0 <= 56 for n <= 7, so uint64
    suffices). Facets are streamed in batches; each batch is deduplicated and
    merged into the running set of faces.
    """
    _guard(n, BRUTE_MAX_N, "brute-force f-vector")
    d = face_dimension(n)
    seen = np.empty(0, dtype=np.uint64)
    pending = []
    all_facets = facets(n)
    for k, f in enumerate(all_facets):
        bits = np.array([1 << v for v in sorted(f.vertex_ids)], dtype=np.uint64)
        pending.append(_kernels.subset_masks(bits))
        if len(pending) == batch or k == len(all_facets) - 1:
            seen = np.union1d(seen, np.unique(np.concatenate(pending)))
            pending = []
    sizes = _kernels.popcount(seen)
    counts = np.bincount(sizes, minlength=d + 1)[1:d + 1]
    return FVector(n, tuple(int(c) for c in counts))


def _triangles_closed_form(n: int, cubic_sign: int) -> Fraction:
    t = n - 1
    M = surjections
    return (cubic_sign * Fraction(1, 6) * (t - 2) * (t - 1) * t
            + 2 * (t - 1) * t * (1 + M(t - 2, 2))
            - 5 * t * M(t - 1, 2) - 8 * t * M(t - 1, 3) - 2 * t * M(t - 1, 4)
            + Fraction(19, 6) * M(t, 3) + Fraction(55, 6) * M(t, 4)
            + 7 * M(t, 5) + 2 * M(t, 6))


def triangles(n: int) -> int:
    """Number of circular 3-split systems over n points (closed form).

    The cubic term enters with a minus sign; with a plus sign the form
    overcounts by 2 C(n-1, 3). See :func:`triangles_positive_cubic`.
    """
    if n < 4:
        raise ValueError("triangles needs n >= 4")
    v = _triangles_closed_form(n, -1)
    assert v.denominator == 1
    return int(v)


def triangles_positive_cubic(n: int) -> Fraction:
    """The same closed form with ``+ (t-2)(t-1)t/6``; does not count triangles."""
    return _triangles_closed_form(n, +1)


@lru_cache(maxsize=None)
def _c1r_typeset_table() -> np.ndarray:
    # lut[ts]: is the 3-row matrix with one column of each type in ts C1R?
    lut = np.zeros(256, dtype=np.uint8)
    for ts in range(256):
        cols = [[(t >> r) & 1 for r in range(3)] for t in range(8) if ts >> t & 1]
        m = np.array(cols, dtype=np.uint8).T.reshape(3, len(cols))
        lut[ts] = is_c1r(m)[0]
    return lut


# column types of the two forbidden 3-row configurations (bit r = row r)
TYPES_I = (1 << 0b011) | (1 << 0b101) | (1 << 0b110)
TYPES_III = (1 << 0b001) | (1 << 0b010) | (1 << 0b100) | (1 << 0b111)


def triangles_bruteforce(n: int):
    """Count circular 3-split systems by testing every triple; returns ``(count, FijTable)``."""
    _guard(n, TRIANGLES_BRUTE_MAX_N, "brute-force triangle count")
    masks = np.array([s.mask for s in nontrivial_splits(n)], dtype=np.int64)
    table = _kernels.triangle_scan(masks, n, _c1r_typeset_table(), TYPES_I, TYPES_III)
    if table[3:, :].any() or table[:, 4:].any():
        raise RuntimeError("a C1R triple contains a full forbidden configuration")
    counts = {(i, j): int(table[i, j]) for i in range(3) for j in range(4)}
    fij = FijTable(n, counts)
    return fij.total, fij


def count_F03(n: int) -> int:
    """Closed form for circular 3-split systems with three column types from
    the III family and none from the I family."""
    if n < 4:
        raise ValueError("count_F03 needs n >= 4")
    M = surjections
    a = M(n - 1, 3) - 3 * (n - 1) * M(n - 2, 2) + 3 * (n - 1) * (n - 2)
    b = (M(n - 1, 4) - 3 * (n - 1) * M(n - 2, 3) + 3 * (n - 1) * (n - 2) * M(n - 3, 2)
         - (n - 1) * (n - 2) * (n - 3))
    c = M(n - 1, 3) - (n - 1) * M(n - 2, 2)
    e = M(n - 1, 4) - (n - 1) * M(n - 2, 3)
    v = Fraction(a, 6) + Fraction(b, 6) + Fraction(c, 2) + Fraction(e, 2)
    return int(v) if v.denominator == 1 else v


def fvector_formulas(n: int) -> FVector:
    """f0, f1, f2, ridges and facets from closed forms; other entries None.

    The ridge count (C(n,2)-n) f_{d-1} relies on every ridge lying in one
    facet, which needs n >= 5; for n = 4 it is left out.
    """
    if n < 4:
        raise ValueError("fvector_formulas needs n >= 4")
    d = face_dimension(n)
    counts: list = [None] * d
    f0 = 2 ** (n - 1) - n - 1
    facets_count = factorial(n - 1) // 2
    counts[0] = f0
    if d > 1:
        counts[1] = comb(f0, 2)
    if d > 2:
        counts[2] = triangles(n)
    counts[d - 1] = facets_count
    if n >= 5:
        counts[d - 2] = (comb(n, 2) - n) * facets_count
    return FVector(n, tuple(counts))
