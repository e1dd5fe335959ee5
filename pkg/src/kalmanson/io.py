"""Text and JSON formats for split systems, binary matrices, metrics and
decompositions."""
from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .geometry import Decomposition, Metric
from .splits import CircularOrdering, Split, SplitSystem, make_split


class InputError(ValueError):
    """Malformed or out-of-contract input."""


# --------------------------------------------------------------------------
# split systems: {"n": 5, "splits": [[3, 4, 5], [2, 3]]}

def split_system_to_dict(ss: SplitSystem) -> dict:
    return {"n": ss.n, "splits": [sorted(s.block) for s in ss.sorted()]}


def dumps_split_system(ss: SplitSystem) -> str:
    return json.dumps(split_system_to_dict(ss))


def split_system_from_dict(obj) -> SplitSystem:
    if not isinstance(obj, dict) or "n" not in obj or "splits" not in obj:
        raise InputError('split system JSON needs keys "n" and "splits"')
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 4:
        raise InputError(f"n must be an integer >= 4, got {n!r}")
    splits = []
    for blk in obj["splits"]:
        if not isinstance(blk, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in blk):
            raise InputError(f"split block must be a list of integers, got {blk!r}")
        if len(set(blk)) != len(blk):
            raise InputError(f"split block {blk} repeats an element")
        try:
            splits.append(make_split(n, blk))
        except ValueError as e:
            raise InputError(str(e)) from None
    if len(set(splits)) != len(splits):
        raise InputError("split system lists the same split twice")
    return SplitSystem(n, splits)


def loads_split_system(text: str) -> SplitSystem:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"invalid JSON: {e}") from None
    return split_system_from_dict(obj)


def parse_split_label(n: int, label: str) -> Split:
    """Inverse of ``str(Split)``: ``"12|345"`` or ``"1,2|3,4,5"``."""
    left, sep, _ = label.partition("|")
    if not sep:
        raise InputError(f"split label {label!r} has no '|'")
    members = [int(x) for x in (left.split(",") if "," in label or n >= 10 else left)]
    return make_split(n, members)


# --------------------------------------------------------------------------
# binary matrices: one row per line of '0'/'1' characters

def parse_matrix(text: str) -> np.ndarray:
    rows = [line.strip() for line in text.splitlines() if line.strip()]
    if not rows:
        raise InputError("matrix file has no rows")
    width = len(rows[0])
    for k, row in enumerate(rows, 1):
        if set(row) - {"0", "1"}:
            raise InputError(f"row {k} has characters other than 0/1: {row!r}")
        if len(row) != width:
            raise InputError(f"row {k} has {len(row)} columns, expected {width}")
    return np.array([[int(c) for c in row] for row in rows], dtype=np.uint8)


def format_matrix(a) -> str:
    return "\n".join("".join(str(int(x)) for x in row) for row in np.asarray(a))


# --------------------------------------------------------------------------
# metrics: whitespace separated n x n; integers, decimals or p/q

def parse_metric(text: str) -> Metric:
    rows = []
    for line in text.splitlines():
        tokens = line.split()
        if not tokens:
            continue
        try:
            rows.append([Fraction(t) for t in tokens])
        except (ValueError, ZeroDivisionError):
            raise InputError(f"cannot parse metric row {line.strip()!r}") from None
    if not rows:
        raise InputError("metric file is empty")
    try:
        return Metric(tuple(tuple(r) for r in rows))
    except ValueError as e:
        raise InputError(str(e)) from None


def format_metric(m: Metric) -> str:
    cells = [[str(x) for x in row] for row in m.d]
    width = max(len(c) for row in cells for c in row)
    return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)


# --------------------------------------------------------------------------
# decompositions; rationals as strings so nothing passes through floats

def decomposition_to_dict(dec: Decomposition) -> dict:
    return {
        "ordering": list(dec.ordering.order),
        "alpha": [str(a) for a in dec.alpha],
        "weights": {str(s): str(w) for s, w in sorted(dec.weights.items())},
    }


def decomposition_from_dict(obj) -> Decomposition:
    ordering = CircularOrdering(tuple(obj["ordering"]))
    n = ordering.n
    alpha = tuple(Fraction(a) for a in obj["alpha"])
    weights = {parse_split_label(n, k): Fraction(v) for k, v in obj["weights"].items()}
    return Decomposition(ordering, alpha, weights)
