"""Kalmanson conditions, the ray matrices of the Kalmanson cone, circular
decomposition of metrics and the Kalmanson fast path for the TSP.

All arithmetic is exact. Metric entries are ``Fraction``; when every entry
fits after scaling by the common denominator, scans run on an int64 copy
through the compiled kernels (the conditions are homogeneous, so scaling does
not change any comparison).

Elements are 1-based everywhere in this module's inputs and outputs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from math import lcm
from typing import Optional, Sequence

import numpy as np

from . import _kernels, exact
from .splits import CircularOrdering, Split, canonical_orderings, canonical_orderings_array, make_split

RECOGNIZE_MAX_N = 10
TSP_MAX_N = 12
_INT_LIMIT = 1 << 58


@dataclass(frozen=True)
class Metric:
    """Symmetric non-negative matrix of exact rationals with zero diagonal.

    The triangle inequality is not required.
    """

    d: tuple

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.d)
        n = len(rows)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError("metric must be a square matrix")
            if row[i] != 0:
                raise ValueError(f"diagonal entry ({i + 1},{i + 1}) is {row[i]}, expected 0")
            for j, x in enumerate(row):
                if x < 0:
                    raise ValueError(f"entry ({i + 1},{j + 1}) is negative: {x}")
                if x != rows[j][i]:
                    raise ValueError(f"matrix is not symmetric at ({i + 1},{j + 1})")
        object.__setattr__(self, "d", rows)

    @classmethod
    def from_array(cls, a) -> "Metric":
        return cls(tuple(tuple(row) for row in np.asarray(a, dtype=object)))

    @property
    def n(self) -> int:
        return len(self.d)

    def __call__(self, x: int, y: int) -> Fraction:
        """Distance between elements ``x`` and ``y`` (1-based)."""
        return self.d[x - 1][y - 1]

    def array(self) -> np.ndarray:
        a = np.empty((self.n, self.n), dtype=object)
        for i, row in enumerate(self.d):
            a[i, :] = row
        return a

    @cached_property
    def _scaled(self) -> Optional[np.ndarray]:
        den = lcm(*(x.denominator for row in self.d for x in row)) if self.n else 1
        vals = [[int(x * den) for x in row] for row in self.d]
        top = max((v for row in vals for v in row), default=0)
        if top * max(self.n, 4) >= _INT_LIMIT:
            return None
        return np.array(vals, dtype=np.int64).reshape(self.n, self.n)

    def __add__(self, other: "Metric") -> "Metric":
        return Metric(tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.d, other.d)))


def as_metric(m) -> Metric:
    return m if isinstance(m, Metric) else Metric.from_array(m)


def satisfies_triangle_inequality(m) -> bool:
    m = as_metric(m)
    d = m.d
    r = range(m.n)
    return all(d[i][k] <= d[i][j] + d[j][k] for i in r for j in r for k in r)


# --------------------------------------------------------------------------
# Kalmanson conditions
# --------------------------------------------------------------------------

def _order0(order, n) -> np.ndarray:
    o = np.asarray(tuple(order), dtype=np.int64) - 1
    if sorted(o.tolist()) != list(range(n)):
        raise ValueError(f"{tuple(order)} is not a permutation of 1..{n}")
    return o


def _violation_exact(d, order):
    n = len(order)
    for i, j, k, l in combinations(range(n), 4):
        a, b, c, e = order[i], order[j], order[k], order[l]
        rhs = d[a][c] + d[b][e]
        if d[a][b] + d[c][e] > rhs or d[a][e] + d[b][c] > rhs:
            return (i, j, k, l)
    return None


def is_kalmanson_under(m, order: Sequence[int]):
    """Check the Kalmanson conditions after relabelling positions by ``order``.

    Position ``p`` holds element ``order[p]``. Returns ``(ok, quadruple)``
    where ``quadruple`` lists the elements at the first violating positions
    i<j<k<l in lexicographic order.
    """
    m = as_metric(m)
    o = _order0(order, m.n)
    scaled = m._scaled
    if scaled is not None:
        hit = _kernels.kalmanson_violation(scaled, o)
        pos = None if hit[0] < 0 else tuple(int(x) for x in hit)
    else:
        pos = _violation_exact(m.d, o.tolist())
    if pos is None:
        return True, None
    return False, tuple(int(o[p]) + 1 for p in pos)


def is_kalmanson(m):
    """Kalmanson conditions in the given labelling: see :func:`is_kalmanson_under`."""
    m = as_metric(m)
    return is_kalmanson_under(m, range(1, m.n + 1))


# --------------------------------------------------------------------------
# Ray and lineality matrices
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RayMatrix:
    """``E^(i)``, ``V^(i)`` or ``V^(i,j)`` of the n-point Kalmanson cone.

    ``kind`` is ``"E"`` or ``"V"``; a ``"V"`` ray with ``j`` set is
    ``V^(i,j)``.
    """

    kind: str
    n: int
    i: int
    j: Optional[int] = None

    def __post_init__(self):
        n, i, j = self.n, self.i, self.j
        if self.kind == "E":
            ok = j is None and 1 <= i <= n
        elif self.kind == "V" and j is None:
            ok = 2 <= i <= n - 2
        elif self.kind == "V":
            ok = 1 <= i <= n - 3 and i + 2 <= j <= n - 1
        else:
            raise ValueError(f"unknown ray kind {self.kind!r}")
        if not ok:
            raise ValueError(f"index out of range for {self}")

    def __str__(self):
        idx = f"{self.i}" if self.j is None else f"{self.i},{self.j}"
        return f"{self.kind}^({idx})"

    @property
    def matrix(self) -> np.ndarray:
        n, i, j = self.n, self.i, self.j
        p = np.arange(1, n + 1)
        P, Q = p[:, None], p[None, :]
        if self.kind == "E":
            m = (P == i) ^ (Q == i)
        elif j is None:
            m = ((P <= i) & (i < Q)) | ((Q <= i) & (i < P))
        else:
            up = ((P <= i) & (i < Q) & (Q <= j)) | ((i < P) & (P <= j) & (j < Q))
            m = up | up.T
        return m.astype(np.int8)

    @property
    def block(self) -> frozenset:
        """One side of the split whose split metric this ray is."""
        if self.kind == "E":
            return frozenset({self.i})
        if self.j is None:
            return frozenset(range(1, self.i + 1))
        return frozenset(range(self.i + 1, self.j + 1))


def ray_matrix(kind: str, n: int, i: int, j: Optional[int] = None) -> RayMatrix:
    return RayMatrix(kind, n, i, j)


def cone_rays(n: int) -> list:
    """The n(n-3)/2 rays ``V^(i)`` then ``V^(i,j)``, in index order."""
    rays = [RayMatrix("V", n, i) for i in range(2, n - 1)]
    rays += [RayMatrix("V", n, i, j) for i in range(1, n - 2) for j in range(i + 2, n)]
    return rays


def basis(n: int) -> list:
    """``E^(1..n)`` followed by :func:`cone_rays`; C(n,2) matrices in all."""
    return [RayMatrix("E", n, i) for i in range(1, n + 1)] + cone_rays(n)


def permute_matrix(a, sigma: Sequence[int]) -> np.ndarray:
    """Symmetric relabelling: entry (p, q) moves to (sigma(p), sigma(q))."""
    a = np.asarray(a)
    s = np.asarray(tuple(sigma), dtype=np.int64) - 1
    out = np.empty_like(a)
    out[np.ix_(s, s)] = a
    return out


def ray_to_split(r: RayMatrix, sigma: Optional[Sequence[int]] = None) -> Split:
    """The split of the permuted ray ``sigma . r``; E-rays are rejected."""
    if r.kind == "E":
        raise ValueError("E rays span the lineality space and carry trivial splits")
    if sigma is None:
        return make_split(r.n, r.block)
    sigma = tuple(sigma)
    return make_split(r.n, {sigma[x - 1] for x in r.block})


# --------------------------------------------------------------------------
# Circular decomposition
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Decomposition:
    """``m = sum_x alpha[x-1] E^(x) + sum_S weights[S] delta_S`` exactly.

    ``alpha`` is indexed by element, so it does not depend on which member
    of the dihedral class was used. ``weights`` holds strictly positive
    coefficients only; every key is an arc of ``ordering``.
    """

    ordering: CircularOrdering
    alpha: tuple
    weights: dict = field(hash=False)

    def reconstruct(self) -> Metric:
        n = self.ordering.n
        d = [[Fraction(0)] * n for _ in range(n)]
        for x in range(n):
            for y in range(n):
                if x != y:
                    d[x][y] = self.alpha[x] + self.alpha[y]
        for s, w in self.weights.items():
            for x in s.block:
                for y in s.other:
                    d[x - 1][y - 1] += w
                    d[y - 1][x - 1] += w
        return Metric(tuple(tuple(r) for r in d))


@lru_cache(maxsize=None)
def _basis_inverse(n: int):
    pairs = list(combinations(range(n), 2))
    cols = [r.matrix for r in basis(n)]
    a = [[int(c[p, q]) for c in cols] for p, q in pairs]
    return exact.inverse(a)


def coordinates(m, order: Sequence[int]) -> list:
    """Coefficients of ``m`` in the basis permuted by ``order``, as Fractions.

    Order matches :func:`basis`: ``alpha`` by position, then ``beta``, then
    ``gamma``.
    """
    m = as_metric(m)
    o = [x - 1 for x in order]
    vec = [m.d[o[p]][o[q]] for p, q in combinations(range(m.n), 2)]
    return exact.matvec(_basis_inverse(m.n), vec)


def decompose(m, ordering) -> Optional[Decomposition]:
    """Circular decomposition along ``ordering``, or None when ``m`` is outside its cone.

    Cone membership means every ray coefficient is non-negative; zero
    coefficients are allowed but not reported.
    """
    m = as_metric(m)
    if not isinstance(ordering, CircularOrdering):
        ordering = CircularOrdering(tuple(ordering))
    if ordering.n != m.n:
        raise ValueError("ordering and metric have different sizes")
    n = m.n
    order = ordering.order
    coef = coordinates(m, order)
    ray_coef = coef[n:]
    if any(c < 0 for c in ray_coef):
        return None
    alpha = [Fraction(0)] * n
    for p in range(n):
        alpha[order[p] - 1] = coef[p]
    weights = {}
    for r, c in zip(cone_rays(n), ray_coef):
        if c > 0:
            weights[ray_to_split(r, order)] = c
    return Decomposition(ordering, tuple(alpha), weights)


def alpha_identity_residuals(m, dec: Decomposition) -> list:
    """``d(a,b) + d(b,c) - d(a,c) - 2 alpha_b`` for each cyclically adjacent a,b,c."""
    m = as_metric(m)
    o = dec.ordering.order
    n = len(o)
    out = []
    for p in range(n):
        a, b, c = o[p], o[(p + 1) % n], o[(p + 2) % n]
        out.append(m(a, b) + m(b, c) - m(a, c) - 2 * dec.alpha[b - 1])
    return out


def recognize(m):
    """Find the first canonical ordering under which ``m`` is Kalmanson.

    Returns ``(ordering, decomposition)`` or None. Orderings are scanned in
    lexicographic canonical order, so the witness is deterministic.
    """
    m = as_metric(m)
    n = m.n
    if n > RECOGNIZE_MAX_N:
        raise ValueError(f"recognition is exhaustive and limited to n <= {RECOGNIZE_MAX_N}")
    if n < 3:
        raise ValueError("recognition needs at least 3 points")
    scaled = m._scaled
    found = None
    if scaled is not None:
        r = _kernels.first_kalmanson_ordering(scaled, canonical_orderings_array(n))
        if r >= 0:
            found = tuple(int(x) + 1 for x in canonical_orderings_array(n)[r])
    else:
        for order in canonical_orderings(n):
            if _violation_exact(m.d, [x - 1 for x in order]) is None:
                found = order
                break
    if found is None:
        return None
    ordering = CircularOrdering(found)
    return ordering, decompose(m, ordering)


# --------------------------------------------------------------------------
# TSP
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Tour:
    """A closed tour; ``perm`` starts at 1 and has ``perm[1] < perm[-1]``."""

    perm: tuple
    length: Fraction

    def __str__(self):
        return "(" + ",".join(str(x) for x in self.perm) + f") length={self.length}"


def tour_length(m, perm: Sequence[int]) -> Fraction:
    m = as_metric(m)
    perm = tuple(perm)
    return sum((m(a, b) for a, b in zip(perm, perm[1:] + perm[:1])), Fraction(0))


def _tour(m, perm) -> Tour:
    perm = CircularOrdering(tuple(perm)).order
    return Tour(perm, tour_length(m, perm))


def tsp_bruteforce(m) -> Tour:
    """Exact optimum over all (n-1)!/2 tours; ties go to the lexicographically first."""
    m = as_metric(m)
    n = m.n
    if n > TSP_MAX_N:
        raise ValueError(f"brute-force TSP is limited to n <= {TSP_MAX_N}")
    if n < 3:
        raise ValueError("TSP needs at least 3 points")
    scaled = m._scaled
    if scaled is not None:
        _, best = _kernels.tsp(scaled)
        return _tour(m, (1,) + tuple(int(x) + 1 for x in best))
    best = None
    for order in canonical_orderings(n):
        length = tour_length(m, order)
        if best is None or length < best.length:
            best = Tour(order, length)
    return best


def tsp_kalmanson(m) -> Optional[Tour]:
    """Tour along the recognised circular ordering; None if not permuted Kalmanson."""
    m = as_metric(m)
    hit = recognize(m)
    if hit is None:
        return None
    return _tour(m, hit[0].order)


# --------------------------------------------------------------------------
# Generators
# --------------------------------------------------------------------------

def metric_from_decomposition(n: int, alpha, weights) -> Metric:
    """Build ``sum alpha_x E^(x) + sum w_S delta_S``."""
    dummy = CircularOrdering(tuple(range(1, n + 1)))
    return Decomposition(dummy, tuple(Fraction(a) for a in alpha),
                         {s: Fraction(w) for s, w in weights.items()}).reconstruct()


def random_circular_metric(n: int, rng: np.random.Generator, ordering=None,
                           density: float = 0.5, max_weight: int = 9,
                           rational: bool = False) -> Metric:
    """Random non-negative combination of the arcs of ``ordering``.

    With ``ordering`` None a uniformly random ordering is used. ``alpha`` is
    non-negative so the result is always a valid metric.
    """
    if ordering is None:
        ordering = tuple(int(x) + 1 for x in rng.permutation(n))
    ordering = CircularOrdering(tuple(ordering))

    def draw():
        num = int(rng.integers(1, max_weight + 1))
        if rational:
            return Fraction(num, int(rng.integers(1, 5)))
        return Fraction(num)

    weights = {s: draw() for s in ordering.arcs() if rng.random() < density}
    alpha = [draw() if rng.random() < density else Fraction(0) for _ in range(n)]
    return metric_from_decomposition(n, alpha, weights)


def random_metric(n: int, rng: np.random.Generator, max_value: int = 20) -> Metric:
    """Symmetric matrix with independent integer entries in 1..max_value."""
    a = np.zeros((n, n), dtype=np.int64)
    iu = np.triu_indices(n, 1)
    a[iu] = rng.integers(1, max_value + 1, size=len(iu[0]))
    return Metric.from_array((a + a.T).tolist())
