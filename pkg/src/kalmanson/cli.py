"""Command-line interface.

Exit codes: 0 when the answer is yes, 1 when the mathematics says no (not
circular, not Kalmanson, a configuration was found, a cross-check
disagreed), 2 for malformed input or a violated size guard.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import consecutive_ones as c1
from . import enumeration as en
from . import geometry as geo
from . import io
from .splits import CircularOrdering, SplitSystem, is_circular, is_weakly_compatible

OK, NO, BAD = 0, 1, 2


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise io.InputError(f"cannot read {path}: {e.strerror}") from None


def _emit(args, payload: dict, text: str) -> int:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)
    return OK if payload["status"] == "ok" else NO


def _cols(perm):
    return None if perm is None else [c + 1 for c in perm]


# --------------------------------------------------------------------------

def cmd_splits(args) -> int:
    ss = io.loads_split_system(_read(args.file))
    if args.action == "circular":
        ok, ordering = is_circular(ss)
        order = list(ordering.order) if ok else None
        payload = {"status": "ok" if ok else "violation", "circular": ok, "ordering": order}
        text = f"circular: yes\nordering: {ordering}" if ok else "circular: no"
        return _emit(args, payload, text)
    if args.action == "weakly-compatible":
        ok, w = is_weakly_compatible(ss)
        payload = {"status": "ok" if ok else "violation", "weakly_compatible": ok}
        text = "weakly compatible: yes"
        if not ok:
            payload["triple"] = [str(s) for s in w.splits]
            payload["blocks"] = [sorted(b) for b in w.blocks]
            payload["points"] = {"a": w.a, "a1": w.a1, "a2": w.a2, "a3": w.a3}
            blocks = ", ".join("{" + ",".join(map(str, sorted(b))) + "}" for b in w.blocks)
            text = (f"weakly compatible: no\ntriple: {' '.join(payload['triple'])}\n"
                    f"blocks: {blocks}\npoints: a={w.a} a1={w.a1} a2={w.a2} a3={w.a3}")
        return _emit(args, payload, text)
    rc = c1.splits_to_rowclass(ss)
    rows = [io.format_matrix([r]) for r in rc.rows]
    return _emit(args, {"status": "ok", "matrix": rows}, "\n".join(rows))


def _tucker_candidates(m_rows, m_cols, max_rows=8):
    k = 1
    while k + 2 <= min(m_rows, max_rows):
        for fam in ("I", "II", "III"):
            yield c1.TuckerConfig(fam, k)
        k += 1
    yield c1.TuckerConfig("IV")
    yield c1.TuckerConfig("V")


def cmd_matrix(args) -> int:
    a = io.parse_matrix(_read(args.file))
    if args.action in ("c1r", "circ1r"):
        ok, perm = c1.is_c1r(a) if args.action == "c1r" else c1.is_circ1r(a)
        payload = {"status": "ok" if ok else "violation", args.action: ok, "witness": _cols(perm)}
        text = f"{args.action}: {'yes' if ok else 'no'}"
        if ok:
            text += "\ncolumn order: " + " ".join(map(str, _cols(perm)))
        return _emit(args, payload, text)
    for cfg in _tucker_candidates(*a.shape):
        found, where = c1.contains_configuration(a, cfg)
        if found:
            rows, cols = where
            payload = {"status": "violation", "family": cfg.family, "k": cfg.k,
                       "rows": [r + 1 for r in rows], "columns": [c + 1 for c in cols]}
            text = (f"configuration: {cfg}\nrows: {' '.join(str(r + 1) for r in rows)}\n"
                    f"columns: {' '.join(str(c + 1) for c in cols)}")
            return _emit(args, payload, text)
    return _emit(args, {"status": "ok", "family": None}, "configuration: none found")


def _parse_ordering(text: str) -> CircularOrdering:
    try:
        return CircularOrdering(tuple(int(x) for x in text.split(",")))
    except ValueError as e:
        raise io.InputError(f"bad --ordering: {e}") from None


def cmd_metric(args) -> int:
    m = io.parse_metric(_read(args.file))
    if args.require_triangle and not geo.satisfies_triangle_inequality(m):
        raise io.InputError("matrix violates the triangle inequality (--require-triangle)")
    if args.action == "kalmanson":
        ok, quad = geo.is_kalmanson(m)
        payload = {"status": "ok" if ok else "violation", "kalmanson": ok,
                   "quadruple": None if ok else list(quad)}
        text = "kalmanson: yes" if ok else f"kalmanson: no\nquadruple: {' '.join(map(str, quad))}"
        return _emit(args, payload, text)
    if m.n > geo.RECOGNIZE_MAX_N:
        raise io.InputError(f"n={m.n} exceeds the recognition limit {geo.RECOGNIZE_MAX_N}")
    if args.action == "recognize":
        hit = geo.recognize(m)
        if hit is None:
            return _emit(args, {"status": "not-member", "ordering": None}, "permuted kalmanson: no")
        return _emit(args, {"status": "ok", "ordering": list(hit[0].order)},
                     f"permuted kalmanson: yes\nordering: {hit[0]}")
    if args.action == "decompose":
        if args.ordering:
            dec = geo.decompose(m, _parse_ordering(args.ordering))
        else:
            hit = geo.recognize(m)
            dec = None if hit is None else hit[1]
        if dec is None:
            return _emit(args, {"status": "not-member"}, "circular decomposition: none")
        payload = {"status": "ok", **io.decomposition_to_dict(dec)}
        lines = [f"ordering: {dec.ordering}",
                 "alpha: " + " ".join(str(x) for x in dec.alpha)]
        lines += [f"{s}  {w}" for s, w in sorted(dec.weights.items())]
        return _emit(args, payload, "\n".join(lines))
    # tsp
    if args.oracle and m.n > geo.TSP_MAX_N:
        raise io.InputError(f"n={m.n} exceeds the brute-force TSP limit {geo.TSP_MAX_N}")
    tour = geo.tsp_kalmanson(m)
    oracle = geo.tsp_bruteforce(m) if args.oracle else None
    payload = {"status": "ok" if tour is not None else "not-member",
               "tour": None if tour is None else list(tour.perm),
               "length": None if tour is None else str(tour.length)}
    lines = [f"tour: {tour}" if tour is not None else "tour: none (not permuted kalmanson)"]
    if oracle is not None:
        payload["oracle_tour"] = list(oracle.perm)
        payload["oracle_length"] = str(oracle.length)
        lines.append(f"oracle: {oracle}")
        if tour is not None:
            agree = tour.length == oracle.length
            payload["agree"] = agree
            lines.append(f"agree: {'yes' if agree else 'no'}")
            if not agree:
                payload["status"] = "violation"
    return _emit(args, payload, "\n".join(lines))


def _fvector_table(n, rows):
    heads = ["k"] + [name for name, _ in rows]
    body = []
    for k in range(en.face_dimension(n)):
        body.append([str(k)] + ["?" if v[k] is None else str(v[k]) for _, v in rows])
    widths = [max(len(r[c]) for r in [heads] + body) for c in range(len(heads))]
    fmt = lambda r: "  ".join(x.rjust(w) for x, w in zip(r, widths))
    return "\n".join([f"n = {n}", fmt(heads)] + [fmt(r) for r in body])


def cmd_complex(args) -> int:
    n = args.n
    if n < 4:
        raise io.InputError("n must be at least 4")
    if args.action == "fvector":
        method = args.method or ("both" if n <= en.BRUTE_MAX_N else "formula")
        if method in ("brute", "both") and n > en.BRUTE_MAX_N:
            raise io.InputError(f"brute-force f-vector is limited to n <= {en.BRUTE_MAX_N}")
        rows = []
        if method in ("brute", "both"):
            rows.append(("brute", en.fvector_bruteforce(n).counts))
        if method in ("formula", "both"):
            rows.append(("formula", en.fvector_formulas(n).counts))
        payload = {"status": "ok", "n": n, "method": method}
        payload.update({name: list(v) for name, v in rows})
        if method == "both":
            bad = [k for k, (b, f) in enumerate(zip(rows[0][1], rows[1][1])) if f is not None and f != b]
            payload["mismatches"] = bad
            if bad:
                payload["status"] = "violation"
        return _emit(args, payload, _fvector_table(n, rows))
    if args.action == "triangles":
        method = args.method or "formula"
        if method in ("brute", "both") and n > en.TRIANGLES_BRUTE_MAX_N:
            raise io.InputError(f"brute-force triangle count is limited to n <= {en.TRIANGLES_BRUTE_MAX_N}")
        payload = {"status": "ok", "n": n, "method": method}
        lines = []
        if method in ("formula", "both"):
            payload["formula"] = en.triangles(n)
            lines.append(f"formula: {payload['formula']}")
        if method in ("brute", "both"):
            count, fij = en.triangles_bruteforce(n)
            payload["brute"] = count
            payload["fij"] = {f"{i},{j}": c for (i, j), c in sorted(fij.counts.items())}
            lines.append(f"brute: {count}")
        if method == "both" and payload["formula"] != payload["brute"]:
            payload["status"] = "violation"
        if method != "both":
            lines = [str(payload[method])]
        return _emit(args, payload, "\n".join(lines))
    if n > en.FACETS_MAX_N:
        raise io.InputError(f"facet listing is limited to n <= {en.FACETS_MAX_N}")
    splits = en.nontrivial_splits(n)
    fs = en.facets(n)
    listing = [{"ordering": list(f.ordering.order),
                "splits": [str(splits[v]) for v in sorted(f.vertex_ids)]} for f in fs]
    text = "\n".join([f"{len(fs)} facets"] + [f"{f.ordering}  " + " ".join(e["splits"])
                                             for f, e in zip(fs, listing)])
    return _emit(args, {"status": "ok", "count": len(fs), "facets": listing}, text)


def cmd_generate(args) -> int:
    rng = np.random.default_rng(args.seed)
    n = args.n
    if args.kind == "metric":
        if n < 3:
            raise io.InputError("n must be at least 3")
        ordering = None if args.scramble else tuple(range(1, n + 1))
        m = geo.random_circular_metric(n, rng, ordering=ordering, rational=args.rational)
        print(io.format_metric(m))
        return OK
    if n < 4:
        raise io.InputError("n must be at least 4")
    pool = en.nontrivial_splits(n)
    if args.circular:
        arcs = CircularOrdering(tuple(int(x) + 1 for x in rng.permutation(n))).arcs()
        pool = arcs
    k = min(args.k, len(pool))
    pick = rng.choice(len(pool), size=k, replace=False)
    ss = SplitSystem(n, [pool[i] for i in sorted(pick)])
    print(io.dumps_split_system(ss))
    return OK


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(prog="kalmanson",
                                description="Circular split systems, Kalmanson metrics and circular-ones matrices.",
                                epilog="exit status: 0 yes, 1 the answer is no, 2 bad input")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("splits", parents=[common], help="split-system JSON files")
    s.add_argument("action", choices=["circular", "weakly-compatible", "to-matrix"])
    s.add_argument("file")
    s.set_defaults(func=cmd_splits)

    m = sub.add_parser("matrix", parents=[common], help="0/1 matrix text files")
    m.add_argument("action", choices=["c1r", "circ1r", "tucker"])
    m.add_argument("file")
    m.set_defaults(func=cmd_matrix)

    d = sub.add_parser("metric", parents=[common], help="distance matrix files")
    d.add_argument("action", choices=["kalmanson", "recognize", "decompose", "tsp"])
    d.add_argument("file")
    d.add_argument("--require-triangle", action="store_true",
                   help="reject input that violates the triangle inequality")
    d.add_argument("--oracle", action="store_true", help="tsp: cross-check by brute force")
    d.add_argument("--ordering", help="decompose: comma-separated circular ordering")
    d.set_defaults(func=cmd_metric)

    c = sub.add_parser("complex", parents=[common], help="face counts")
    c.add_argument("action", choices=["fvector", "triangles", "facets"])
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--method", choices=["brute", "formula", "both"])
    c.set_defaults(func=cmd_complex)

    g = sub.add_parser("generate", parents=[common], help="random instances for testing")
    g.add_argument("kind", choices=["metric", "splits"])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--k", type=int, default=3, help="splits: number of splits")
    g.add_argument("--circular", action="store_true", help="splits: draw arcs of one ordering")
    g.add_argument("--scramble", action="store_true", help="metric: keep a random labelling")
    g.add_argument("--rational", action="store_true", help="metric: non-integer weights")
    g.set_defaults(func=cmd_generate)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (io.InputError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return BAD


if __name__ == "__main__":
    sys.exit(main())
