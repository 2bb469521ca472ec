"""Batch command-line front end.

Subcommands: ``gen``, ``count``, ``cexact``, ``search``, ``audit``,
``formulas``.  All machine-readable output uses stable key order and
integer-only values, so identical invocations (any worker count) produce
byte-identical bytes; wall-clock timing is only emitted under
``--timing``.  Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import constructions, core, formulas, search
from .counting import count_report
from .patterns import by_name, names


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get("HYPERTURAN_WORKERS", "1")))
    except ValueError:
        return 1


def _write(text: str, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load_host(args):
    if getattr(args, "input", None):
        with open(args.input) as fh:
            return core.loads(fh.read())
    if getattr(args, "spec", None):
        return constructions.realize(constructions.parse_spec(args.spec)).system
    raise core.Error("provide --input or --spec")


def _cmd_gen(args) -> int:
    if args.config:
        if args.output is None:
            raise core.Error("--config batch generation requires -o as a filename prefix")
        with open(args.config) as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
        for i, line in enumerate(lines):
            rc = constructions.realize(constructions.parse_spec(line))
            _write(core.dumps(rc.system), f"{args.output}{i:03d}.u3")
        return 0
    if not args.spec:
        raise core.Error("gen needs --spec (or --config)")
    rc = constructions.realize(constructions.parse_spec(args.spec))
    _write(core.dumps(rc.system), args.output)
    return 0


def _cmd_count(args) -> int:
    host = _load_host(args)
    pat = by_name(args.pattern)
    rep = count_report(
        host,
        pat,
        per_edge=args.per_edge,
        per_vertex=args.per_vertex,
        workers=args.workers,
    )
    _write(json.dumps(rep.to_dict(timing=args.timing), indent=2) + "\n", args.output)
    return 0


def _cmd_cexact(args) -> int:
    pat = by_name(args.pattern)
    bound = search.c_exact(
        pat, args.n, r=args.r, orbit_reduction=not args.full, workers=args.workers
    )
    out = {
        "pattern": bound.pattern,
        "n": bound.n,
        "value": bound.value,
        "provenance": bound.provenance,
        "witness": " ".join(map(str, bound.witness)),
    }
    _write(json.dumps(out, indent=2) + "\n", args.output)
    return 0


def _cmd_search(args) -> int:
    pats = [by_name(p) for p in args.pattern]
    res = search.exact_turan(
        args.n,
        pats,
        budget=args.budget,
        symmetry_breaking=args.symmetry_breaking,
        witness_cap=args.witness_cap,
    )
    d = res.to_dict()
    if not args.timing:
        d["millis"] = 0
    _write(json.dumps(d, indent=2) + "\n", args.output)
    return 0


def _cmd_audit(args) -> int:
    pat = by_name(args.pattern)
    spec_strings = []
    if args.config:
        with open(args.config) as fh:
            spec_strings = [ln.strip() for ln in fh if ln.strip()]
    elif args.spec:
        spec_strings = [args.spec]
    else:
        raise core.Error("audit needs --spec (or --config)")
    out = []
    for s in spec_strings:
        if args.trials > 0:
            reports = search.audit_perturbed(
                s, pat, args.q, args.trials, seed=args.seed,
                mode=args.mode, workers=args.workers,
            )
            out.extend(r.to_dict() for r in reports)
        else:
            out.append(search.audit_sharpness(s, pat, args.q, workers=args.workers).to_dict())
    payload = out[0] if len(out) == 1 else out
    _write(json.dumps(payload, indent=2) + "\n", args.output)
    return 0


def _formula_cell(fn, *a):
    try:
        return str(fn(*a))
    except formulas.DomainError:
        return "-"


def _cmd_formulas(args) -> int:
    hi = args.to if args.to is not None else args.n
    if hi < args.n:
        raise core.Error(f"--to {hi} below --n {args.n}")
    rows = []
    for n in range(args.n, hi + 1):
        rows.append(
            {
                "n": n,
                "p3": _formula_cell(formulas.p3_size, n),
                "t3": _formula_cell(formulas.t3_size, n),
                "b3": _formula_cell(formulas.b3_size, n),
                f"t3r(r={args.r})": _formula_cell(formulas.t3r_size, n, args.r),
                "c_fano": _formula_cell(formulas.c_fano, n),
                "q_fano": _formula_cell(formulas.q_fano, n),
            }
        )
    if args.json:
        _write(json.dumps(rows, indent=2) + "\n", args.output)
        return 0
    header = list(rows[0].keys())
    lines = ["\t".join(header)]
    lines.extend("\t".join(str(row[k]) for k in header) for row in rows)
    _write("\n".join(lines) + "\n", args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperturan",
        description=(
            "Extremal triple-system toolkit: generate the extremal hosts and "
            "their sharp edge additions, count pattern copies exactly, compute "
            "one-added-edge minima, run desk-scale extremal searches, and audit "
            "sharpness claims."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("-o", dest="output", default=None, help="output file (default stdout)")
        p.add_argument(
            "--workers",
            type=int,
            default=_default_workers(),
            help="worker processes (default: HYPERTURAN_WORKERS or 1); results are "
            "identical for every worker count",
        )

    g = sub.add_parser(
        "gen",
        help="build a construction (extremal base plus additions) and write its edge list",
    )
    g.add_argument("--spec", help="construction string, e.g. p3:n=8+zero2:q=4")
    g.add_argument("--config", help="file of construction strings, one per line")
    add_common(g)
    g.set_defaults(fn=_cmd_gen)

    c = sub.add_parser(
        "count",
        help="count copies of a catalog pattern in a host (total, per edge, per vertex)",
    )
    c.add_argument("--pattern", required=True, help=f"one of {', '.join(names())}, L<k>")
    c.add_argument("--input", help="host edge-list file (u3 format)")
    c.add_argument("--spec", help="or a construction string to build the host")
    c.add_argument("--per-edge", action="store_true", help="copies through every host edge")
    c.add_argument("--per-vertex", action="store_true", help="copies through every vertex")
    c.add_argument("--timing", action="store_true", help="emit real milliseconds")
    add_common(c)
    c.set_defaults(fn=_cmd_count)

    x = sub.add_parser(
        "cexact",
        help="minimum copies created by one edge added to the pattern's extremal base",
    )
    x.add_argument("--pattern", required=True)
    x.add_argument("--n", type=int, required=True)
    x.add_argument("--r", type=int, default=None, help="consistency check for L patterns")
    x.add_argument(
        "--full", action="store_true",
        help="enumerate every non-edge instead of one per part-signature orbit",
    )
    add_common(x)
    x.set_defaults(fn=_cmd_cexact)

    s = sub.add_parser(
        "search",
        help="branch-and-bound maximum edge count avoiding the given patterns",
    )
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--pattern", action="append", required=True, help="repeatable")
    s.add_argument("--budget", type=int, default=search.DEFAULT_SEARCH_BUDGET)
    s.add_argument("--symmetry-breaking", action="store_true")
    s.add_argument("--witness-cap", type=int, default=4)
    s.add_argument("--timing", action="store_true", help="emit real milliseconds")
    add_common(s)
    s.set_defaults(fn=_cmd_search)

    a = sub.add_parser(
        "audit",
        help="engine-count a construction's copies against q * c_exact",
    )
    a.add_argument("--spec", help="construction string with its additions")
    a.add_argument("--config", help="file of construction strings, one per line")
    a.add_argument("--pattern", required=True)
    a.add_argument("--q", type=int, required=True, help="expected number of added edges")
    a.add_argument("--trials", type=int, default=0, help="perturbed trials (0: sharp audit only)")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--mode", choices=["add", "rewire"], default="add")
    add_common(a)
    a.set_defaults(fn=_cmd_audit)

    f = sub.add_parser(
        "formulas",
        help="closed-form table: extremal sizes and the one-edge Fano quantities",
    )
    f.add_argument("--n", type=int, required=True, help="first row")
    f.add_argument("--to", type=int, default=None, help="last row (default: --n)")
    f.add_argument("--r", type=int, default=4, help="r for the r-partite size column")
    fmt = f.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--tsv", action="store_true", help="default")
    add_common(f)
    f.set_defaults(fn=_cmd_formulas)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except core.Error as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
