"""Splits of a finite ground set {1..n}, split systems and circularity.

A split is stored by its block that does not contain element 1, so two
equal bipartitions are always structurally equal. Internally every block is
also held as a bitmask with element ``x`` on bit ``x - 1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable, Iterator, NamedTuple, Optional

import numpy as np

from . import _kernels


def _full(n: int) -> int:
    return (1 << n) - 1


def _members(mask: int) -> frozenset:
    out = []
    x = 1
    while mask:
        if mask & 1:
            out.append(x)
        mask >>= 1
        x += 1
    return frozenset(out)


def _mask(members: Iterable[int]) -> int:
    m = 0
    for x in members:
        m |= 1 << (x - 1)
    return m


@dataclass(frozen=True)
class Split:
    """A bipartition of {1..n}, identified by the block not containing 1."""

    n: int
    block: frozenset
    mask: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        block = frozenset(int(x) for x in self.block)
        object.__setattr__(self, "block", block)
        if self.n < 2:
            raise ValueError(f"ground set too small: n={self.n}")
        if not block:
            raise ValueError("split block is empty")
        if 1 in block:
            raise ValueError("canonical block must not contain element 1; use make_split")
        if min(block) < 1 or max(block) > self.n:
            raise ValueError(f"block {sorted(block)} not inside 1..{self.n}")
        object.__setattr__(self, "mask", _mask(block))

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "Split":
        if mask & 1:
            mask ^= _full(n)
        return cls(n, _members(mask))

    @property
    def other(self) -> frozenset:
        """The block containing element 1."""
        return frozenset(range(1, self.n + 1)) - self.block

    @property
    def size(self) -> int:
        k = len(self.block)
        return min(k, self.n - k)

    @property
    def is_trivial(self) -> bool:
        return self.size < 2

    @property
    def is_minimal(self) -> bool:
        return self.size == 2

    @property
    def sort_key(self) -> tuple:
        return tuple(sorted(self.block))

    def __lt__(self, other: "Split") -> bool:
        return (self.n, self.sort_key) < (other.n, other.sort_key)

    def __str__(self) -> str:
        sep = "" if self.n < 10 else ","
        a = sep.join(str(x) for x in sorted(self.other))
        b = sep.join(str(x) for x in sorted(self.block))
        return f"{a}|{b}"

    def permuted(self, sigma) -> "Split":
        """Relabel elements: ``x -> sigma[x - 1]`` (``sigma`` lists 1-based images)."""
        return make_split(self.n, {sigma[x - 1] for x in self.block})


def make_split(n: int, members: Iterable[int]) -> Split:
    """Canonical split with ``members`` as one block.

    >>> make_split(5, {1, 2})
    Split(n=5, block=frozenset({3, 4, 5}))
    """
    members = frozenset(int(x) for x in members)
    if not members:
        raise ValueError("split block is empty")
    if min(members) < 1 or max(members) > n:
        raise ValueError(f"elements {sorted(members)} not inside 1..{n}")
    if len(members) == n:
        raise ValueError("split block is the whole ground set")
    if 1 in members:
        members = frozenset(range(1, n + 1)) - members
    return Split(n, members)


@lru_cache(maxsize=None)
def nontrivial_splits(n: int) -> tuple:
    """Every non-trivial split of {1..n}, sorted by canonical block."""
    out = []
    for k in range(2, n - 1):
        for block in combinations(range(2, n + 1), k):
            s = Split(n, frozenset(block))
            if not s.is_trivial:
                out.append(s)
    return tuple(sorted(out))


class SplitSystem:
    """An immutable set of distinct splits over one ground set."""

    __slots__ = ("n", "splits")

    def __init__(self, n: int, splits: Iterable[Split] = ()):
        splits = frozenset(splits)
        for s in splits:
            if s.n != n:
                raise ValueError(f"split {s} is over n={s.n}, expected n={n}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "splits", splits)

    def __setattr__(self, key, value):
        raise AttributeError("SplitSystem is immutable")

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "SplitSystem":
        return cls(n, (make_split(n, b) for b in blocks))

    def __iter__(self) -> Iterator[Split]:
        return iter(self.sorted())

    def __len__(self) -> int:
        return len(self.splits)

    def __contains__(self, s) -> bool:
        return s in self.splits

    def __eq__(self, other) -> bool:
        if not isinstance(other, SplitSystem):
            return NotImplemented
        return self.n == other.n and self.splits == other.splits

    def __hash__(self) -> int:
        return hash((self.n, self.splits))

    def __repr__(self) -> str:
        inner = ", ".join(str(s) for s in self.sorted())
        return f"SplitSystem(n={self.n}, {{{inner}}})"

    def sorted(self) -> list:
        return sorted(self.splits)

    def masks(self) -> np.ndarray:
        return np.array([s.mask for s in self.sorted()], dtype=np.int64)


@dataclass(frozen=True)
class CircularOrdering:
    """A dihedral class of cyclic orders, held in canonical form.

    Canonical form starts with 1 and has ``order[1] < order[-1]``.
    """

    order: tuple

    def __post_init__(self):
        order = tuple(int(x) for x in self.order)
        n = len(order)
        if sorted(order) != list(range(1, n + 1)):
            raise ValueError(f"{order} is not a permutation of 1..{n}")
        object.__setattr__(self, "order", _canonical_order(order))

    @property
    def n(self) -> int:
        return len(self.order)

    def arcs(self) -> list:
        """The n(n-3)/2 non-trivial splits whose blocks are arcs of the order."""
        n = self.n
        seen = set()
        out = []
        for start in range(n):
            for length in range(2, n - 1):
                block = [self.order[(start + t) % n] for t in range(length)]
                s = make_split(n, block)
                if s not in seen:
                    seen.add(s)
                    out.append(s)
        return sorted(out)

    def is_arc(self, s: Split) -> bool:
        pos = [self.order.index(x) for x in s.block]
        return _cyclically_contiguous(sorted(pos), self.n)

    def __str__(self) -> str:
        return "(" + ",".join(str(x) for x in self.order) + ")"


def _canonical_order(order: tuple) -> tuple:
    n = len(order)
    if n < 3:
        return tuple(sorted(order))
    i = order.index(1)
    rot = order[i:] + order[:i]
    if rot[1] > rot[-1]:
        rot = (rot[0],) + tuple(reversed(rot[1:]))
    return rot


def _cyclically_contiguous(positions: list, n: int) -> bool:
    # sorted positions form one cyclic run iff at most one gap exceeds 1
    gaps = sum(1 for a, b in zip(positions, positions[1:] + [positions[0] + n]) if b - a > 1)
    return gaps <= 1


def canonical_orderings(n: int) -> Iterator[tuple]:
    """Canonical cyclic orders of 1..n in lexicographic order; (n-1)!/2 of them for n >= 3."""
    for rest in permutations(range(2, n + 1)):
        if n < 3 or rest[0] < rest[-1]:
            yield (1,) + rest


@lru_cache(maxsize=None)
def canonical_orderings_array(n: int) -> np.ndarray:
    """0-based version of :func:`canonical_orderings` as an int64 array."""
    rows = list(canonical_orderings(n))
    return np.array(rows, dtype=np.int64).reshape(len(rows), n) - 1


def split_metric(s: Split) -> np.ndarray:
    """The 0/1 matrix that is 1 exactly on pairs separated by ``s``."""
    side = np.zeros(s.n, dtype=np.int8)
    side[[x - 1 for x in s.block]] = 1
    return (side[:, None] ^ side[None, :]).astype(np.int8)


def split_from_metric(m) -> Split:
    """Recover the split whose split metric is ``m``."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("split metric must be a square matrix")
    if not np.isin(m, (0, 1)).all():
        raise ValueError("split metric entries must be 0 or 1")
    n = m.shape[0]
    block = {x + 1 for x in range(n) if m[0, x] == 1}
    if not block:
        raise ValueError("matrix does not separate any pair; not a split metric")
    s = make_split(n, block)
    if not np.array_equal(split_metric(s), m):
        raise ValueError("matrix is not the split metric of any bipartition")
    return s


class Incompatibility(NamedTuple):
    """Witness that three splits are not weakly compatible.

    ``blocks`` are the chosen sides A1, A2, A3; ``a`` lies in all three and
    ``a1, a2, a3`` each lie in exactly their own side.
    """

    splits: tuple
    blocks: tuple
    a: int
    a1: int
    a2: int
    a3: int


def _lowest(mask: int) -> int:
    return (mask & -mask).bit_length()


def is_weakly_compatible(ss: SplitSystem):
    """Return ``(ok, witness)``; ``witness`` is an :class:`Incompatibility` or None."""
    splits = ss.sorted()
    if len(splits) < 3:
        return True, None
    masks = np.array([s.mask for s in splits], dtype=np.int64)
    full = _full(ss.n)
    i, j, l, o = (int(v) for v in _kernels.weak_violation(masks, full))
    if i < 0:
        return True, None
    sides = []
    for bit, idx in enumerate((i, j, l)):
        m = splits[idx].mask
        sides.append(full ^ m if (o >> bit) & 1 else m)
    a1, a2, a3 = sides
    w = Incompatibility(
        splits=(splits[i], splits[j], splits[l]),
        blocks=tuple(_members(x) for x in sides),
        a=_lowest(a1 & a2 & a3),
        a1=_lowest(a1 & ~a2 & ~a3),
        a2=_lowest(a2 & ~a1 & ~a3),
        a3=_lowest(a3 & ~a1 & ~a2),
    )
    return False, w


def join(s1: Split, s2: Split, orientation=(0, 0)) -> Optional[Split]:
    """``{A1 & A2, B1 | B2}``, or None when ``A1 & A2`` is empty.

    ``orientation[i]`` picks which block of split i plays ``A_i``: 0 for the
    canonical block (without element 1), 1 for its complement.
    """
    if s1.n != s2.n:
        raise ValueError("splits are over different ground sets")
    full = _full(s1.n)
    a1 = s1.mask ^ (full if orientation[0] else 0)
    a2 = s2.mask ^ (full if orientation[1] else 0)
    a = a1 & a2
    if a == 0:
        return None
    return Split.from_mask(s1.n, a)


def crosses(s1: Split, s2: Split) -> bool:
    """True when all four block intersections are nonempty (incompatible pair)."""
    full = _full(s1.n)
    a1, b1 = s1.mask, full ^ s1.mask
    a2, b2 = s2.mask, full ^ s2.mask
    return bool(a1 & a2 and a1 & b2 and b1 & a2 and b1 & b2)


def circular_closure(ss: SplitSystem) -> SplitSystem:
    """``ss`` plus every non-trivial join of a crossing pair, over all orientations.

    ``ss`` is circular iff the result is weakly compatible. Trivial joins are
    dropped; a trivial split can never take part in a weak incompatibility.
    """
    out = set(ss.splits)
    for s1, s2 in combinations(ss.sorted(), 2):
        if not crosses(s1, s2):
            continue
        for o in ((0, 0), (0, 1), (1, 0), (1, 1)):
            j = join(s1, s2, o)
            if j is not None and not j.is_trivial:
                out.add(j)
    return SplitSystem(ss.n, out)


def is_circular(ss: SplitSystem):
    """Return ``(circular, ordering)`` using the consecutive-ones reduction.

    The split system is sent to its binary row class and tested for the
    consecutive ones property; the column order of the witness is a cyclic
    order in which every split is an arc.
    """
    from .consecutive_ones import is_circ1r, splits_to_rowclass

    if len(ss) == 0:
        return True, CircularOrdering(tuple(range(1, ss.n + 1)))
    ok, perm = is_circ1r(splits_to_rowclass(ss).matrix)
    if not ok:
        return False, None
    return True, CircularOrdering(tuple(c + 1 for c in perm))


@lru_cache(maxsize=12)
def _arc_incidence(n: int):
    """Map split mask -> bitset over canonical orderings in which it is an arc."""
    orders = list(canonical_orderings(n))
    inc = {}
    full = _full(n)
    for r, order in enumerate(orders):
        bit = 1 << r
        for start in range(n):
            m = 0
            for length in range(1, n):
                m |= 1 << (order[(start + length - 1) % n] - 1)
                key = m ^ full if m & 1 else m
                inc[key] = inc.get(key, 0) | bit
    # each arc is reached from both ends; the OR makes that harmless
    return orders, inc


def is_circular_exhaustive(ss: SplitSystem):
    """Return ``(circular, ordering)`` by scanning all (n-1)!/2 canonical orderings.

    The witness is the first ordering in lexicographic enumeration order.
    """
    if ss.n > 10:
        raise ValueError("exhaustive circularity search is limited to n <= 10")
    orders, inc = _arc_incidence(ss.n)
    live = (1 << len(orders)) - 1
    for s in ss.splits:
        live &= inc.get(s.mask, 0)
        if not live:
            return False, None
    return True, CircularOrdering(orders[_lowest(live) - 1])


def is_circular_by_closure(ss: SplitSystem) -> bool:
    ok, _ = is_weakly_compatible(circular_closure(ss))
    return ok
