"""Command line interface: ``latpoly <verb> [options]``.

Exit codes: 0 success, 1 verification mismatch, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

from . import store
from .properties import PROPERTY_NAMES, analyze

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--resume", action="store_true", help="continue from the run checkpoint")
    p.add_argument("--budget", type=int, default=200_000, help="node limit for UC/UT searches")
    p.add_argument("--idp-max-degree", type=int, default=None, help="check IDP up to this dilation")
    p.add_argument("--in", dest="inp", help="input database")
    p.add_argument("--out", help="output path (default: stdout where sensible)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = _Parser(prog="latpoly", description="Lattice polytopes of small volume.", parents=[common])
    sub = ap.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    e = sub.add_parser("enumerate", parents=[common], help="all polytopes up to a volume")
    e.add_argument("--dim", type=int, required=True)
    e.add_argument("--max-volume", type=int, required=True)

    s = sub.add_parser("simplices", parents=[common], help="all simplices up to a volume")
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--max-volume", type=int, required=True)
    s.add_argument("--exact-volume", type=int)

    a = sub.add_parser("analyze", parents=[common], help="property flags per polytope (CSV)")
    a.add_argument("--props", default=",".join(PROPERTY_NAMES))

    sub.add_parser("hstar", parents=[common], help="h*-vectors per polytope (CSV)")

    c = sub.add_parser("conjectures", parents=[common], help="check the 3-dimensional h* inequalities")
    c.add_argument("--exception-k-max", type=int, default=20)

    st = sub.add_parser("stats", parents=[common], help="per-volume property counts")
    st.add_argument("--analysis", help="CSV from 'analyze' (computed on the fly if omitted)")
    st.add_argument("--props", default="spanning,va,idp,uc,ut")

    v = sub.add_parser("verify", parents=[common], help="compare counts with a reference table")
    v.add_argument("--analysis", help="CSV from 'analyze'")
    v.add_argument("--fixture", help="reference table name, e.g. counts_d3 or smooth_d3")
    v.add_argument("--columns", default="TOT", help="comma-separated columns to compare")

    df = sub.add_parser("diff", parents=[common], help="compare two databases by key")
    df.add_argument("left")
    df.add_argument("right")
    return ap


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _need_input(args) -> list[store.DatabaseRecord]:
    if not args.inp:
        raise _Usage("--in is required")
    return store.read_db(args.inp)


class _Usage(Exception):
    pass


def _analyze_one(job):
    rec, props, budget, idp_deg = job
    P = rec.polytope()
    return len(P.lattice_points), analyze(P, props, budget, idp_deg)


def _analyze_all(recs, props, args):
    jobs = [(r, props, args.budget, args.idp_max_degree) for r in recs]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            results = list(ex.map(_analyze_one, jobs, chunksize=4))
    else:
        results = [_analyze_one(j) for j in jobs]
    return [(r, n, pr) for r, (n, pr) in zip(recs, results)]


def _parse_props(text: str) -> list[str]:
    props = [p for p in text.split(",") if p]
    bad = [p for p in props if p not in PROPERTY_NAMES]
    if bad:
        raise _Usage(f"unknown properties: {', '.join(bad)}")
    return props


def cmd_enumerate(args) -> int:
    if not args.out:
        raise _Usage("--out is required")
    recs = store.run_enumeration(args.dim, args.max_volume, args.out, jobs=args.jobs, resume=args.resume)
    print(f"{len(recs)} polytopes written to {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_simplices(args) -> int:
    from .simplices import enumerate_simplices, enumerate_simplices_upto
    if not args.out:
        raise _Usage("--out is required")
    if args.exact_volume is not None:
        classes = enumerate_simplices(args.dim, args.exact_volume)
    else:
        classes = enumerate_simplices_upto(args.dim, args.max_volume)
    recs = store.records_from_classes(classes)
    store.write_db(recs, args.out, args.dim, args.max_volume)
    return EXIT_OK


def cmd_analyze(args) -> int:
    recs = _need_input(args)
    rows = _analyze_all(recs, _parse_props(args.props), args)
    _emit(store.write_analysis_csv(rows, None), args.out)
    return EXIT_OK


def cmd_hstar(args) -> int:
    from .ehrhart import h_star
    recs = _need_input(args)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    dim = max((r.dim for r in recs), default=0)
    w.writerow(["key", "volume", "points", "interior", *[f"h{i}" for i in range(dim + 1)]])
    for r in recs:
        P = r.polytope()
        w.writerow([r.canonical_key(), r.volume, len(P.lattice_points), len(P.interior_points),
                    *h_star(P).coefficients])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_conjectures(args) -> int:
    from .equivalence import canonical_key
    from .ehrhart import CONJ_MAIN_LABELS, check_conj_main, conj_main_exceptions, h_star
    recs = _need_input(args)
    exceptions = {canonical_key(x.polytope) for x in conj_main_exceptions(args.exception_k_max)}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "h*", "inequality", "listed_exception"])
    failures = checked = 0
    for r in recs:
        if r.dim != 3:
            continue
        h = h_star(r.polytope()).coefficients
        if h[3] < 1:
            continue
        checked += 1
        listed = r.canonical_key() in exceptions
        res = check_conj_main(h, listed)
        for lab in CONJ_MAIN_LABELS:
            if not res[lab]:
                w.writerow([r.canonical_key(), " ".join(map(str, h)), lab, int(listed)])
                if not (lab == "4*" and listed):
                    failures += 1
    _emit(buf.getvalue(), args.out)
    print(f"{checked} polytopes checked, {failures} unexpected failures", file=sys.stderr)
    return EXIT_MISMATCH if failures else EXIT_OK


def _table(args, recs, columns):
    props = None
    if args.analysis:
        props = store.read_analysis_csv(args.analysis)
    elif len(columns) > 1:
        short = {"SP": "spanning", "VA": "va", "IDP": "idp", "UC": "uc", "UT": "ut", "SMOOTH": "smooth"}
        rows = _analyze_all(recs, [short[c] for c in columns if c != "TOT"], args)
        props = {r.canonical_key(): pr for r, _, pr in rows}
    return store.stats(recs, props, columns)


def cmd_stats(args) -> int:
    recs = _need_input(args)
    names = {"spanning": "SP", "va": "VA", "idp": "IDP", "uc": "UC", "ut": "UT", "smooth": "SMOOTH"}
    columns = ["TOT"] + [names[p] for p in _parse_props(args.props)]
    table = _table(args, recs, columns)
    _emit(table.to_csv(columns), args.out)
    return EXIT_OK if table.hierarchy_ok() else EXIT_MISMATCH


def cmd_verify(args) -> int:
    recs = _need_input(args)
    header = store.read_header(args.inp)
    dim = recs[0].dim if recs else int(header.get("dim", 0))
    name = args.fixture or f"counts_d{dim}"
    try:
        fixture = store.load_fixture(name)
    except FileNotFoundError:
        raise _Usage(f"no reference table {name!r}") from None
    columns = [c.strip() for c in args.columns.split(",") if c.strip()]
    table = _table(args, recs, columns)
    top = int(header["max_volume"]) if header.get("max_volume", "None") != "None" else None
    mism = store.verify(table, fixture, top)
    for m in mism:
        print(f"volume {m.volume} {m.column}: got {m.got}, expected {m.expected}")
    return EXIT_MISMATCH if mism else EXIT_OK


def cmd_diff(args) -> int:
    d = store.diff(store.read_db(args.left), store.read_db(args.right))
    for k in d.only_left:
        print(f"< {k}")
    for k in d.only_right:
        print(f"> {k}")
    return EXIT_MISMATCH if d else EXIT_OK


COMMANDS = {
    "enumerate": cmd_enumerate, "simplices": cmd_simplices, "analyze": cmd_analyze,
    "hstar": cmd_hstar, "conjectures": cmd_conjectures, "stats": cmd_stats,
    "verify": cmd_verify, "diff": cmd_diff,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.jobs < 1:
        print("latpoly: error: --jobs must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.verb](args)
    except _Usage as exc:
        print(f"latpoly: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (store.FormatError, FileNotFoundError) as exc:
        print(f"latpoly: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
