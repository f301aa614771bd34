"""``lcsq`` command line: compute, oracle and verify."""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import ENGINE, verify
from .fixtures import cite
from .ncalg import GradingError, ParseError, Presentation, parse_poly
from .oracle import (HypothesisError, QPolyParams, jh_rank, jh_series, n2_rank,
                     n3_rank_conjecture, qpoly_group, skew_group, torsion3_count)
from .records import CACHE_ENV, ResultCache, ResultRecord, cache_key
from .series import SeriesQuery, TotalDegree, quotient_structure, sweep_cells

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_GRADING, EXIT_BUDGET = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _cell_arg(text: str) -> tuple[int, ...]:
    try:
        cell = tuple(int(t) for t in text.replace(" ", "").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad cell {text!r}; expected e.g. 1,1,2") from None
    if any(c < 0 for c in cell):
        raise argparse.ArgumentTypeError(f"cell {text!r} has a negative entry")
    return cell


def _series_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--series", choices=("B", "N"), required=True)
    p.add_argument("--k", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lcsq", description="Lower central series quotients of Z<x_1..x_n>/(f).")
    parser.add_argument("--version", action="version", version=ENGINE)
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="compute B_k or N_k cell by cell")
    c.add_argument("-g", "--generators", type=int, required=True)
    c.add_argument("-r", "--relation", default=None, help='e.g. "x^3+y^3" or "y*x - 2*x*y"')
    _series_arg(c)
    where = c.add_mutually_exclusive_group(required=True)
    where.add_argument("--max-degree", type=int)
    where.add_argument("--cell", type=_cell_arg, help="multidegree, comma separated")
    where.add_argument("--degree", type=int, help="a single total degree")
    c.add_argument("--min-degree", type=int, default=0)
    c.add_argument("--grading", choices=("auto", "total", "multi"), default="auto")
    c.add_argument("--format", choices=("table", "json", "csv"), default="table")
    c.add_argument("--cache-dir", default=None, help=f"defaults to ${CACHE_ENV} when set")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--no-timing", action="store_true", help="report ms as 0")
    c.add_argument("-o", "--output", default=None)

    o = sub.add_parser("oracle", help="closed-form predictions")
    osub = o.add_subparsers(dest="oracle", required=True)
    for name in ("qpoly", "skew"):
        p = osub.add_parser(name)
        if name == "qpoly":
            p.add_argument("--q", type=int, required=True)
        _series_arg(p)
        p.add_argument("--cell", type=_cell_arg, required=True)
    p = osub.add_parser("n2rank")
    p.add_argument("-r", "--relation", required=True)
    p.add_argument("--d", type=int, required=True)
    p = osub.add_parser("n3conj")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p = osub.add_parser("jh")
    _series_arg(p)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--d", type=int, default=None)
    p = osub.add_parser("torsion3")
    p.add_argument("--n", type=int, required=True)

    v = sub.add_parser("verify", help="reproduce tabulated results")
    v.add_argument("suite", choices=sorted(verify.SUITES) + ["all"])
    v.add_argument("--budget", type=float, default=None, help="seconds per suite")
    v.add_argument("--mismatches-only", action="store_true")
    return parser


# compute

def _presentation(args) -> Presentation:
    mode = None if args.grading == "auto" else args.grading
    return Presentation.parse(args.generators, args.relation, mode)


def _cells(args, pres: Presentation) -> list:
    if args.cell is not None:
        return [args.cell]
    grading = pres.grading_mode
    if args.degree is not None:
        return sweep_cells(pres, args.degree, args.degree, grading)
    if args.max_degree < args.k:
        raise UsageError(f"--max-degree must be at least k={args.k}")
    return sweep_cells(pres, args.max_degree, args.min_degree, grading)


def _run_cell(n: int, relation: str | None, grading: str, series: str, k: int, cell) -> dict:
    pres = Presentation.parse(n, relation, grading)
    return ResultRecord.from_report(quotient_structure(SeriesQuery(pres, series, k, cell))).to_json()


def _compute_records(args, pres: Presentation, cells: list) -> list[ResultRecord]:
    root = args.cache_dir or os.environ.get(CACHE_ENV)
    cache = ResultCache(root) if root else None
    rel = pres.relation_text
    out: dict[int, ResultRecord] = {}
    todo = []
    for i, cell in enumerate(cells):
        # validate before any work is farmed out
        SeriesQuery(pres, args.series, args.k, cell)
        hit = cache.load(cache_key(pres.n, rel, args.series, args.k, cell)) if cache else None
        if hit is not None:
            out[i] = hit
        else:
            todo.append((i, cell))
    job_args = [(pres.n, rel, pres.grading_mode, args.series, args.k, c) for _, c in todo]
    if args.jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_cell, *zip(*job_args)))
    else:
        results = [_run_cell(*a) for a in job_args]
    for (i, _), obj in zip(todo, results):
        rec = ResultRecord.from_json(obj)
        if cache:
            cache.store(rec)
        out[i] = rec
    records = [out[i] for i in range(len(cells))]
    if args.no_timing:
        records = [ResultRecord.from_json({**r.to_json(), "ms": 0}) for r in records]
    return records


def _cell_text(cell) -> str:
    return f"d={cell.d}" if isinstance(cell, TotalDegree) else ",".join(map(str, cell))


def format_records(records: list[ResultRecord], fmt: str) -> str:
    if fmt == "json":
        return "".join(r.dumps() + "\n" for r in records)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "relation", "grading", "series", "k", "cell", "rank",
                    "invariant_factors", "engine", "ms"])
        for r in records:
            w.writerow([r.n, r.relation or "", r.grading, r.series, r.k, _cell_text(r.cell), r.rank,
                        " ".join(map(str, r.invariant_factors)), r.engine, r.ms])
        return buf.getvalue()
    if not records:
        return ""
    head = records[0]
    title = f"{head.series}_{head.k} of Z<{head.n} generators>/({head.relation or '0'})"
    rows = [(_cell_text(r.cell), str(r.rank), r.group.torsion_text(), str(r.group)) for r in records]
    hdr = ("cell", "rank", "torsion", "group")
    widths = [max(len(h), *(len(row[i]) for row in rows)) for i, h in enumerate(hdr)]
    lines = [title, "  ".join(h.ljust(w) for h, w in zip(hdr, widths)).rstrip()]
    lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows]
    return "\n".join(lines) + "\n"


def cmd_compute(args) -> int:
    pres = _presentation(args)
    text = format_records(_compute_records(args, pres, _cells(args, pres)), args.format)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# oracle

def _bidegree(cell) -> tuple[int, int]:
    if len(cell) != 2:
        raise UsageError("the cell must be a bidegree i,j")
    return cell


def cmd_oracle(args) -> int:
    which = args.oracle
    if which == "qpoly":
        i, j = _bidegree(args.cell)
        g = qpoly_group(QPolyParams(args.q, args.k, i, j), args.series)
        print(f"{g}  [{cite('qpoly-groups')}]")
    elif which == "skew":
        i, j = _bidegree(args.cell)
        print(f"{skew_group(args.k, i, j, args.series)}  [{cite('skew-groups')}]")
    elif which == "n2rank":
        f = parse_poly(args.relation, 2)
        print(f"{n2_rank(f, args.d)}  [{cite('n2-rank')}]")
    elif which == "n3conj":
        print(f"{n3_rank_conjecture(args.m, args.d)}  [{cite('n3-conjecture')}]")
    elif which == "jh":
        try:
            summands = jh_series(args.series, args.k, args.m)
        except KeyError as e:
            raise UsageError(e.args[0]) from None
        terms = " + ".join(f"{s.multiplicity if s.multiplicity > 1 else ''}F_{s.j}[{s.d0}]"
                           for s in summands)
        print(f"{terms}  [{cite('jh-series')}]")
        if args.d is not None:
            print(f"rank in degree {args.d}: {jh_rank(summands, args.d)}")
    elif which == "torsion3":
        print(f"{torsion3_count(args.n)}  [{cite('torsion3-count')}]")
    return EXIT_OK


# verify

def cmd_verify(args) -> int:
    names = verify.ALL if args.suite == "all" else [args.suite]
    status = EXIT_OK
    for name in names:
        try:
            checks = verify.run_suite(name, args.budget)
        except verify.BudgetExceeded as e:
            print(verify.format_report(name, e.checks, args.mismatches_only))
            print(f"  {e}")
            return EXIT_BUDGET
        print(verify.format_report(name, checks, args.mismatches_only))
        if verify.summarize(checks)[1]:
            status = EXIT_MISMATCH
    return status


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"compute": cmd_compute, "oracle": cmd_oracle, "verify": cmd_verify}[args.command]
    try:
        return handler(args)
    except GradingError as e:
        print(f"lcsq: grading error: {e}", file=sys.stderr)
        return EXIT_GRADING
    except ParseError as e:
        print(f"lcsq: parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, HypothesisError, ValueError) as e:
        print(f"lcsq: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
