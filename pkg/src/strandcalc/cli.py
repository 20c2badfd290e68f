"""Command-line front end: ``python3 -m strandcalc <command> ...``.

Every report is a JSON object with a ``manifest`` (command, parameters,
versions, truncation flags, sha256 of the result) and a ``result``.  Exact
rationals are written as "p/q" strings.  Exit codes: 0 success, 2 usage
error, 3 budget exceeded (partial results flagged), 4 failed verification.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import platform
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import __version__

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_FAILED = 0, 2, 3, 4
BUDGET_ENV = "STRANDCALC_BUDGET"
DEFAULT_MAP_LIMIT = 2_000_000  # rooted maps generated before giving up


class UsageError(Exception):
    pass


# ------------------------------------------------------------ serialization

def to_plain(x):
    """Recursively convert results into JSON-ready values."""
    from .exactpoly import RatPolyN
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, RatPolyN):
        return {"expression": str(x), **x.to_json()}
    if isinstance(x, dict):
        return {str(k): to_plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [to_plain(v) for v in x]
        return sorted(items, key=repr) if isinstance(x, (set, frozenset)) else items
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    return str(x)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def make_report(command: str, params: dict, result, truncation: Optional[dict] = None) -> dict:
    body = to_plain(result)
    digest = hashlib.sha256(canonical_json(body).encode()).hexdigest()
    manifest = {"command": command, "parameters": to_plain(params),
                "versions": {"strandcalc": __version__,
                             "python": ".".join(platform.python_version_tuple()[:2])},
                "truncation": to_plain(truncation or {}),
                "result_sha256": digest}
    return {"manifest": manifest, "result": body}


def _rows_table(rows, fmt: str) -> str:
    if not rows:
        return ""
    cols = list(rows[0])
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({c: r.get(c) for c in cols})
        return buf.getvalue()
    lines = ["| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
    lines += ["| " + " | ".join(str(r.get(c)) for c in cols) + " |" for r in rows]
    return "\n".join(lines) + "\n"


def emit(args, report: dict, rows=None):
    text = canonical_json(report) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.table:
        fmt = "csv" if args.table.endswith(".csv") else "markdown"
        Path(args.table).write_text(_rows_table(rows or _flat_rows(report["result"]), fmt))


def _flat_rows(result):
    if isinstance(result, list) and result and isinstance(result[0], dict):
        return result
    if isinstance(result, dict):
        return [{"key": k, "value": json.dumps(v) if isinstance(v, (dict, list)) else v}
                for k, v in result.items()]
    return [{"value": result}]


def _load(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}")


def _budget(args) -> Optional[int]:
    if getattr(args, "budget_nodes", None):
        return args.budget_nodes
    env = os.environ.get(BUDGET_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{BUDGET_ENV} must be an integer node count, got {env!r}")
    return None


# ------------------------------------------------------------------ commands

def cmd_projector(args) -> int:
    from .diagrams import DiagramOperator
    from .projectors import build_projector, verify_projector
    if args.action == "build":
        P = build_projector(args.rep)
        emit(args, make_report("projector build", {"rep": args.rep},
                               {"rep": args.rep, "terms": len(P), "operator": P}))
        return EXIT_OK
    if args.input:
        P = DiagramOperator.from_json(_load(args.input).get("result", {}).get("operator")
                                      or _load(args.input))
        params = {"in": args.input}
    elif args.rep:
        P = build_projector(args.rep)
        params = {"rep": args.rep}
    else:
        raise UsageError("projector verify needs --in or --rep")
    v = verify_projector(P)
    dim = v["dimension"]
    res = {"idempotent": v["idempotent"], "symmetric": v["symmetric"], "dimension": dim,
           "dimension_at": {str(n): dim.evaluate_at(n) for n in (3, 4, 5, 6)}}
    emit(args, make_report("projector verify", params, res))
    return EXIT_OK if v["idempotent"] and v["symmetric"] else EXIT_FAILED


def cmd_enumerate(args) -> int:
    from .maps import enumerate_maps
    limit = args.limit or _budget(args) or DEFAULT_MAP_LIMIT
    e = enumerate_maps(args.v, args.kind, rooted=args.rooted, filter=args.filter, limit=limit)
    res = {"count": len(e), "truncated": e.truncated}
    if e.multiplicities is not None:
        res["rooted_multiplicities"] = list(e.multiplicities)
    if args.list:
        res["maps"] = [m.to_json() for m in e]
    params = {**vars_of(args, "v", "kind", "rooted", "filter"), "limit": limit}
    emit(args, make_report("enumerate", params,
                           res, {"limit_hit": e.truncated}))
    return EXIT_BUDGET if e.truncated else EXIT_OK


FRAGMENTS = {
    "H0": "fragment_h0", "H4": "fragment_h4", "H5": "fragment_h5",
    "double_tadpole": "double_tadpole_two_point", "melon": "melon_two_point",
    "quartic_rung": "quartic_rung",
}


def cmd_stranded(args) -> int:
    from . import maps
    from .maps import FeynmanMap
    from .stranded import StrandedGraph, faces_and_degree, internal_faces, max_faces_search
    if args.action == "degree":
        cfg = _load(args.config)
        if "map" in cfg:
            g = StrandedGraph.from_json(cfg)
        else:
            if not args.map:
                raise UsageError("stranded degree needs --map unless the config embeds one")
            base = FeynmanMap.from_json(_load(args.map))
            g = StrandedGraph.from_json({"edges": cfg.get("edges", cfg),
                                         "vertex": cfg.get("vertex", "cyclic")}
                                        if isinstance(cfg, dict) else {"edges": cfg}, base)
        res = faces_and_degree(g) if g.base.kind == "vacuum" else internal_faces(g)
        emit(args, make_report("stranded degree", {"map": args.map, "config": args.config}, res))
        return EXIT_OK
    if args.fragment not in FRAGMENTS:
        raise UsageError(f"unknown fragment {args.fragment!r}; choose from {sorted(FRAGMENTS)}")
    frag = getattr(maps, FRAGMENTS[args.fragment])()
    r = max_faces_search(frag, args.external, args.universe, node_budget=_budget(args))
    res = {"fragment": args.fragment, "external": args.external, "universe": args.universe,
           "max_faces": r.max_faces, "lower_bound_only": r.lower_bound_only, "nodes": r.nodes,
           "witness": None if r.witness is None else
           [{"edge": list(e), "pairing": p.to_json()} for e, p in sorted(r.witness.items())]}
    emit(args, make_report("stranded maxfaces",
                           vars_of(args, "fragment", "external", "universe"), res,
                           {"lower_bound_only": r.lower_bound_only}))
    return EXIT_BUDGET if r.lower_bound_only else EXIT_OK


def cmd_boundary(args) -> int:
    from .boundary import AtLeast, BoundaryGraph, flip_distance
    a = BoundaryGraph.from_json(_load(args.a))
    b = BoundaryGraph.from_json(_load(args.b))
    d = flip_distance(a, b, args.cap)
    capped = isinstance(d, AtLeast)
    res = {"distance": None if capped else (None if d == float("inf") else int(d)),
           "at_least": int(d) if capped else None, "comparable": d != float("inf")}
    emit(args, make_report("boundary distance", vars_of(args, "a", "b", "cap"), res,
                           {"capped": capped}))
    return EXIT_BUDGET if capped else EXIT_OK


def cmd_amplitude(args) -> int:
    from .amplitude import contract_map, two_point_scalar
    from .maps import FeynmanMap
    from .projectors import build_projector, build_vertex
    from .stranded import BudgetExceeded
    m = FeynmanMap.from_json(_load(args.map))
    P, v = build_projector(args.rep), build_vertex(args.vertex)
    try:
        if m.kind == "vacuum":
            a = contract_map(m, P, v, max_states=_budget(args))
            res = {"polynomial": a, "leading_power": None if a.is_zero() else a.leading_power(),
                   "grade": m.n_vertices}
        elif m.kind == "two_point":
            f = two_point_scalar(m, P, v, max_states=_budget(args))
            res = {"two_point_scalar": f, "grade": m.n_vertices}
        else:
            raise UsageError("amplitude takes vacuum or two-point maps")
    except BudgetExceeded as exc:
        emit(args, make_report("amplitude", vars_of(args, "map", "rep", "vertex"),
                               {"error": str(exc)}, {"budget_exceeded": True}))
        return EXIT_BUDGET
    emit(args, make_report("amplitude", vars_of(args, "map", "rep", "vertex"), res))
    return EXIT_OK


def cmd_sde(args) -> int:
    from .melonic import compute_f1_f2, solve_sde
    data = compute_f1_f2(args.rep, full_f2=args.full_f2)
    f2 = data["f2"] if args.full_f2 else data["f2_leading"]
    K = solve_sde(data["f1"], f2, args.vmax, args.kmax, args.tadpole_power)
    res = {"rep": args.rep, "f1": data["f1"], "m": data["f2_leading"], "K": K.to_json(),
           "large_n": K.large_n()}
    emit(args, make_report("sde", vars_of(args, "rep", "vmax", "kmax", "tadpole_power",
                                          "full_f2"),
                           res, {"f2_truncated": data["f2_truncated"]}),
         rows=[{"v": v, "k": k, "coefficient": f"{x.numerator}/{x.denominator}"}
               for (v, k), x in sorted(K.c.items())])
    return EXIT_OK


def cmd_dominance(args) -> int:
    from .melonic import dominance_scan
    r = dominance_scan(args.vmax, args.rep, curated=not args.no_curated,
                       time_budget=args.time_budget)
    res = {"rep": args.rep, "maps": len(r.entries), "violations": r.violations,
           "entries": r.entries}
    emit(args, make_report("dominance", vars_of(args, "vmax", "rep", "no_curated"), res,
                           {"partial": r.partial}), rows=r.entries)
    if r.violations:
        return EXIT_FAILED
    return EXIT_BUDGET if r.partial else EXIT_OK


def cmd_verify_all(args) -> int:
    from .checks import CHECKS, run_check
    numbers = sorted(CHECKS)
    if args.only:
        try:
            numbers = [int(x) for x in args.only.split(",")]
        except ValueError:
            raise UsageError("--only takes a comma-separated list of criterion numbers")
        if any(n not in CHECKS for n in numbers):
            raise UsageError(f"criteria are numbered {min(CHECKS)}..{max(CHECKS)}")
    results = []
    for n in numbers:
        r = run_check(n)
        print(r.line(), file=sys.stderr, flush=True)
        results.append(r)
    res = [{"criterion": r.number, "title": r.title, "ok": r.ok, "detail": r.detail}
           for r in results]
    emit(args, make_report("verify-all", {"budget": args.budget, "only": numbers}, res),
         rows=[{"criterion": r.number, "status": "PASS" if r.ok else "FAIL", "title": r.title}
               for r in results])
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAILED


def vars_of(args, *names) -> dict:
    return {n: getattr(args, n) for n in names}


# --------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--table", help="also write a table (.csv, otherwise markdown)")

    p = argparse.ArgumentParser(prog="strandcalc", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    pr = sub.add_parser("projector", parents=[common], help="build or verify a projector")
    pr.add_argument("action", choices=["build", "verify"])
    pr.add_argument("--rep", choices=["A", "S"])
    pr.add_argument("--in", dest="input", help="projector JSON to verify")
    pr.set_defaults(func=cmd_projector)

    en = sub.add_parser("enumerate", parents=[common], help="count Feynman maps")
    en.add_argument("--v", type=int, required=True)
    en.add_argument("--kind", choices=["vacuum", "two_point"], default="vacuum")
    g = en.add_mutually_exclusive_group()
    g.add_argument("--rooted", dest="rooted", action="store_true", default=True)
    g.add_argument("--unrooted", dest="rooted", action="store_false")
    en.add_argument("--filter", choices=["no_melon_no_double_tadpole"])
    en.add_argument("--limit", type=int)
    en.add_argument("--list", action="store_true", help="include every map in the report")
    en.set_defaults(func=cmd_enumerate)

    st = sub.add_parser("stranded", parents=[common], help="degree or face-count search")
    st.add_argument("action", choices=["degree", "maxfaces"])
    st.add_argument("--map")
    st.add_argument("--config")
    st.add_argument("--fragment", default="H0")
    st.add_argument("--external", default="any",
                    choices=["any", "unbroken", "broken", "doubly_broken"])
    st.add_argument("--universe", default="unbroken_only", choices=["all945", "unbroken_only"])
    st.add_argument("--budget-nodes", type=int)
    st.set_defaults(func=cmd_stranded)

    bd = sub.add_parser("boundary", parents=[common], help="flip distance of boundary graphs")
    bd.add_argument("action", choices=["distance"])
    bd.add_argument("--a", required=True)
    bd.add_argument("--b", required=True)
    bd.add_argument("--cap", type=int, default=12)
    bd.set_defaults(func=cmd_boundary)

    am = sub.add_parser("amplitude", parents=[common], help="exact amplitude of a map")
    am.add_argument("--map", required=True)
    am.add_argument("--rep", choices=["A", "S"], default="A")
    am.add_argument("--vertex", choices=["cyclic", "colorable"], default="cyclic")
    am.add_argument("--budget-nodes", type=int, help="cap on contraction states")
    am.set_defaults(func=cmd_amplitude)

    sd = sub.add_parser("sde", parents=[common], help="series solution for K")
    sd.add_argument("--rep", choices=["A", "S"], default="A")
    sd.add_argument("--vmax", type=int, default=6)
    sd.add_argument("--kmax", type=int, default=4)
    sd.add_argument("--tadpole-power", type=int, default=2)
    sd.add_argument("--full-f2", action="store_true")
    sd.set_defaults(func=cmd_sde)

    do = sub.add_parser("dominance", parents=[common], help="leading power vs melonicity")
    do.add_argument("--vmax", type=int, default=4)
    do.add_argument("--rep", choices=["A", "S"], default="A")
    do.add_argument("--no-curated", action="store_true")
    do.add_argument("--time-budget", type=float)
    do.set_defaults(func=cmd_dominance)

    va = sub.add_parser("verify-all", parents=[common], help="run the acceptance checks")
    va.add_argument("--budget", choices=["desk"], default="desk")
    va.add_argument("--only", help="comma-separated criterion numbers")
    va.set_defaults(func=cmd_verify_all)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2
    except ValueError as exc:
        print(f"strandcalc: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
