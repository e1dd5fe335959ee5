"""Consecutive and circular ones for rows of binary matrices.

Column witnesses are 0-based: ``perm[p]`` is the original column placed at
position ``p``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Optional

import numpy as np

from .splits import Split, SplitSystem, make_split


def as_binary(m) -> np.ndarray:
    """Validate and copy ``m`` into a 2-D uint8 array."""
    a = np.asarray(m)
    if a.ndim == 1:
        a = a[None, :]
    if a.ndim != 2:
        raise ValueError("binary matrix must be two-dimensional")
    if a.size and not np.isin(a, (0, 1)).all():
        raise ValueError("binary matrix entries must be 0 or 1")
    return a.astype(np.uint8)


def is_consecutive(m, perm) -> bool:
    """True when every row of ``m[:, perm]`` has its ones in one block."""
    a = as_binary(m)[:, list(perm)]
    for row in a:
        ones = np.flatnonzero(row)
        if ones.size and ones[-1] - ones[0] + 1 != ones.size:
            return False
    return True


def is_circularly_consecutive(m, perm) -> bool:
    """True when every row of ``m[:, perm]`` has its ones or its zeros in one block."""
    a = as_binary(m)[:, list(perm)]
    for row in a:
        if not (is_consecutive(row, range(row.size)) or is_consecutive(1 - row, range(row.size))):
            return False
    return True


def is_c1r(m):
    """Return ``(c1r, perm)``; ``perm`` is the lexicographically least witness.

    Columns are placed left to right in lexicographic order. A placement
    fails when it reopens a row whose block of ones already ended, or ends a
    row block before all of that row's ones are placed. Whether a partial
    order can be completed depends only on (placed set, last column), so
    failed states are memoised and the search is O(2^n n^2) in the worst case.
    """
    a = as_binary(m)
    n = a.shape[1]
    if n == 0:
        return True, ()
    rows_of = [0] * n
    ones = []
    for r, row in enumerate(a):
        cols = 0
        for c in np.flatnonzero(row):
            rows_of[c] |= 1 << r
            cols |= 1 << int(c)
        ones.append(cols)
    # started[used] would be expensive to recompute; track it incrementally
    full = (1 << n) - 1
    dead = set()
    order = []

    def closes_ok(open_rows, used):
        r = 0
        while open_rows:
            if open_rows & 1 and ones[r] & ~used:
                return False
            open_rows >>= 1
            r += 1
        return True

    def extend(used, last, started):
        if used == full:
            return True
        if (used, last) in dead:
            return False
        open_rows = rows_of[last]
        for c in range(n):
            if used >> c & 1:
                continue
            rc = rows_of[c]
            if rc & started & ~open_rows:
                continue
            if not closes_ok(open_rows & ~rc, used):
                continue
            order.append(c)
            if extend(used | 1 << c, c, started | rc):
                return True
            order.pop()
        dead.add((used, last))
        return False

    for c in range(n):
        order.append(c)
        if extend(1 << c, c, rows_of[c]):
            return True, tuple(order)
        order.pop()
    return False, None


def complement_rows_by_first_column(m) -> np.ndarray:
    """Complement every row whose first entry is 1."""
    a = as_binary(m)
    if a.shape[1] == 0:
        return a
    flip = a[:, :1]
    return a ^ flip


def is_circ1r(m):
    """Return ``(circ1r, perm)``.

    A matrix has circular ones iff complementing the rows that start with a
    one yields consecutive ones; the same column order certifies both.
    """
    return is_c1r(complement_rows_by_first_column(m))


# --------------------------------------------------------------------------
# Tucker configurations
# --------------------------------------------------------------------------

FAMILIES = ("I", "II", "III", "IV", "V")


@dataclass(frozen=True)
class TuckerConfig:
    family: str
    k: int = 1

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown Tucker family {self.family!r}")
        if self.family in ("I", "II", "III") and self.k < 1:
            raise ValueError(f"Tucker family {self.family} needs k >= 1, got {self.k}")

    def __str__(self):
        return self.family if self.family in ("IV", "V") else f"{self.family}_{self.k}"


def _path_rows(k, width):
    # rows 1..k+1 of families I-III: ones at columns i and i+1
    rows = np.zeros((k + 1, width), dtype=np.uint8)
    for i in range(k + 1):
        rows[i, i] = rows[i, i + 1] = 1
    return rows


def tucker_config_matrix(c: TuckerConfig) -> np.ndarray:
    k = c.k
    if c.family == "I":
        last = np.zeros((1, k + 2), dtype=np.uint8)
        last[0, 0] = last[0, k + 1] = 1
        return np.vstack([_path_rows(k, k + 2), last])
    if c.family == "II":
        r1 = np.ones((1, k + 3), dtype=np.uint8)
        r1[0, k + 1] = 0
        r2 = np.ones((1, k + 3), dtype=np.uint8)
        r2[0, 0] = 0
        return np.vstack([_path_rows(k, k + 3), r1, r2])
    if c.family == "III":
        last = np.ones((1, k + 3), dtype=np.uint8)
        last[0, 0] = last[0, k + 1] = 0
        return np.vstack([_path_rows(k, k + 3), last])
    if c.family == "IV":
        return np.array([[1, 1, 0, 0, 0, 0],
                         [0, 0, 1, 1, 0, 0],
                         [0, 0, 0, 0, 1, 1],
                         [0, 1, 0, 1, 0, 1]], dtype=np.uint8)
    return np.array([[1, 1, 0, 0, 0],
                     [1, 1, 1, 1, 0],
                     [0, 0, 1, 1, 0],
                     [1, 0, 0, 1, 1]], dtype=np.uint8)


def contains_configuration(m, c: TuckerConfig):
    """Look for a row/column-permuted copy of ``c`` inside ``m``.

    Returns ``(found, (rows, cols))`` with 0-based indices of ``m`` such that
    ``m[np.ix_(rows, cols)]`` is a row and column permutation of the config.
    """
    a = as_binary(m)
    cfg = tucker_config_matrix(c)
    r, w = cfg.shape
    if r > a.shape[0] or w > a.shape[1]:
        return False, None
    for rows in combinations(range(a.shape[0]), r):
        sub = a[list(rows)]
        # column pattern -> available columns of m restricted to these rows
        avail = {}
        for col in range(a.shape[1]):
            avail.setdefault(sub[:, col].tobytes(), []).append(col)
        for rp in permutations(range(r)):
            need = {}
            for col in range(w):
                need.setdefault(cfg[list(rp), col].tobytes(), 0)
                need[cfg[list(rp), col].tobytes()] += 1
            if all(len(avail.get(p, ())) >= cnt for p, cnt in need.items()):
                cols = []
                used = {p: 0 for p in need}
                for col in range(w):
                    p = cfg[list(rp), col].tobytes()
                    cols.append(avail[p][used[p]])
                    used[p] += 1
                # rows of m listed so that m[rows[i]] matches config row i
                ordered_rows = [0] * r
                for pos, cfg_row in enumerate(rp):
                    ordered_rows[cfg_row] = rows[pos]
                return True, (tuple(ordered_rows), tuple(cols))
    return False, None


# --------------------------------------------------------------------------
# Row classes and the split system <-> row class bijection
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RowClass:
    """A binary matrix up to row permutation; rows kept sorted."""

    rows: tuple

    @classmethod
    def from_matrix(cls, m) -> "RowClass":
        a = as_binary(m)
        return cls(tuple(sorted(tuple(int(x) for x in row) for row in a)))

    @property
    def matrix(self) -> np.ndarray:
        if not self.rows:
            return np.zeros((0, 0), dtype=np.uint8)
        return np.array(self.rows, dtype=np.uint8)

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)


def split_row(s: Split) -> tuple:
    return tuple(1 if x in s.block else 0 for x in range(1, s.n + 1))


def splits_to_rowclass(ss: SplitSystem) -> RowClass:
    """Stack the indicator rows of the canonical blocks (first column is zero)."""
    rows = tuple(sorted(split_row(s) for s in ss.splits))
    if not rows:
        return RowClass(())
    return RowClass(rows)


def rowclass_to_splits(rc: RowClass, n: Optional[int] = None) -> SplitSystem:
    a = rc.matrix
    if n is None:
        n = a.shape[1]
    if a.shape[0] and a.shape[1] != n:
        raise ValueError(f"row class has {a.shape[1]} columns, expected {n}")
    if len(set(rc.rows)) != len(rc.rows):
        raise ValueError("row class has duplicate rows")
    out = []
    for row in rc.rows:
        if row[0] != 0:
            raise ValueError("first column of a split row class must be zero")
        k = sum(row)
        if k < 2 or n - k < 2:
            raise ValueError(f"row {row} encodes a trivial split")
        out.append(make_split(n, [j + 1 for j, v in enumerate(row) if v]))
    return SplitSystem(n, out)
