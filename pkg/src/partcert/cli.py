"""partcert command line.

    partcert compute --n 100 --method series
    partcert verify logconcave --from 1 --to 100 --expect odd-le-25
    partcert decay --from 2 --to 2000 --out fig1.csv --order 1
    partcert table --to 10000 --out p.txt

Exit codes: 0 passed, 1 check failed, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from partcert import __version__
from partcert.decay import L_expansion, d_exact, figure1_series, h1_printed, h_terms
from partcert.enclosure import PRECISION_ENV, default_precision
from partcert.exact import PartitionTable, TableFormatError, load_table, p_exact, save_table
from partcert.series import ResolutionError, p_via_series
from partcert.verify import CHECKS, UnknownCheck, parse_expect, resolve_check, scan

CACHE_ENV = "PARTCERT_CACHE"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class _IOFailure(Exception):
    pass


class _UsageFailure(Exception):
    pass


def _err(msg: str) -> None:
    print(f"partcert: {msg}", file=sys.stderr)


def _load_cache() -> Optional[PartitionTable]:
    path = os.environ.get(CACHE_ENV)
    if not path or not Path(path).exists():
        return None
    try:
        return load_table(path)
    except (OSError, TableFormatError, UnicodeDecodeError) as exc:
        raise _IOFailure(f"cannot read table cache {path}: {exc}") from None


def _store_cache(table: PartitionTable) -> None:
    path = os.environ.get(CACHE_ENV)
    if not path:
        return
    target = Path(path)
    try:
        if target.exists() and load_table(target).n_max >= table.n_max:
            return
        save_table(table, target)
    except (OSError, TableFormatError) as exc:
        raise _IOFailure(f"cannot write table cache {path}: {exc}") from None


def _table() -> PartitionTable:
    return _load_cache() or PartitionTable()


def _write_text(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise _IOFailure(f"cannot write {path}: {exc}") from None


# -- commands ------------------------------------------------------------------


def cmd_compute(args) -> int:
    if args.n < 0:
        raise _UsageFailure("n must be nonnegative")
    if args.method == "series":
        if args.n < 1:
            raise _UsageFailure("the series method needs n >= 1")
        try:
            value = p_via_series(args.n)
        except ResolutionError as exc:
            _err(str(exc))
            return EXIT_FAIL
    else:
        table = _table()
        value = p_exact(args.n, table)
        _store_cache(table)
    print(value)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        name = resolve_check(args.check)
    except UnknownCheck:
        raise _UsageFailure(
            f"unknown check {args.check!r}; choose from {', '.join(CHECKS)}") from None
    expected = None
    if args.expect is not None:
        try:
            expected = parse_expect(args.expect)
        except ValueError as exc:
            raise _UsageFailure(str(exc)) from None
    params = {"precision_bits": args.precision}
    if name == "janoski":
        params["normalization"] = args.normalization
    table = _table()
    try:
        report = scan(name, args.lo, args.hi, table=table, **params)
    except ValueError as exc:
        raise _UsageFailure(str(exc)) from None
    _store_cache(table)

    if expected is None:
        ok = report.passed
    else:
        report.parameters["expect"] = args.expect
        ok = not report.indeterminate and set(report.violation_points()) == expected
        report.parameters["matches_expect"] = ok
    _write_text(args.report, report.to_json())
    lo, hi = report.range
    print(
        f"{name} [{lo}, {hi}]: {report.checked} points, {len(report.violations)} violations, "
        f"{len(report.indeterminate)} indeterminate, {'PASS' if ok else 'FAIL'}",
        file=sys.stderr if args.report in (None, "-") else sys.stdout,
    )
    return EXIT_OK if ok else EXIT_FAIL


def _h1_note(prec: int, table: PartitionTable) -> str:
    n = 2000
    corrected, _ = h_terms(n, prec)
    printed = h1_printed(n, prec)
    d = d_exact(n, prec, table)
    return (
        f"note: leading term at n={n}: (C/4) n^-1.5 = {float(corrected.mid()):.6e}, "
        f"4/(C n^1.5) = {float(printed.mid()):.6e}, D(n) = {float(d.mid()):.6e}; "
        "the (C/4) normalization is used"
    )


def cmd_decay(args) -> int:
    if args.lo < 2 or args.lo > args.hi:
        raise _UsageFailure("decay needs 2 <= --from <= --to")
    if args.order is not None and not 0 <= args.order <= 3:
        raise _UsageFailure("--order must lie in 0..3")
    prec = args.precision or default_precision()
    table = _table()
    samples = figure1_series(args.lo, args.hi, prec, table)
    _store_cache(table)

    header = ["n", "d_lo", "d_hi", "normalized_lo", "normalized_hi"]
    if args.order is not None:
        header += ["L_plus", "L_minus"]
    rows = []
    for s in samples:
        row = [s.n, repr(s.d_value.lo_float()), repr(s.d_value.hi_float()),
               repr(s.normalized.lo_float()), repr(s.normalized.hi_float())]
        if args.order is not None:
            for sign in ("plus", "minus"):
                row.append(repr(float(L_expansion(s.n, args.order, sign, prec).mid())))
        rows.append(row)

    print(_h1_note(prec, table), file=sys.stderr)
    if args.out in (None, "-"):
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return EXIT_OK
    try:
        with open(args.out, "w", newline="", encoding="ascii") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        raise _IOFailure(f"cannot write {args.out}: {exc}") from None
    return EXIT_OK


def cmd_table(args) -> int:
    if args.to < 0:
        raise _UsageFailure("--to must be nonnegative")
    cached = _load_cache()
    if cached is not None and cached.n_max >= args.to:
        table = PartitionTable(cached.values[: args.to + 1])
    else:
        table = PartitionTable(cached.values if cached is not None else None)
        table.extend(args.to, exact=True)
    if args.out in (None, "-"):
        sys.stdout.writelines(f"{n} {v}\n" for n, v in enumerate(table.values))
        return EXIT_OK
    try:
        save_table(table, args.out)
    except OSError as exc:
        raise _IOFailure(f"cannot write {args.out}: {exc}") from None
    return EXIT_OK


# -- parser ----------------------------------------------------------------------


def _precision(text: str) -> int:
    try:
        bits = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if bits < 16:
        raise argparse.ArgumentTypeError("precision must be at least 16 bits")
    return bits


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="partcert",
        description="Certified computations with the partition function p(n).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="print p(n)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=("recurrence", "series"), default="recurrence")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="scan a range and write a JSON report")
    p.add_argument("check", help=f"one of: {', '.join(CHECKS)}")
    p.add_argument("--from", dest="lo", type=int, default=None)
    p.add_argument("--to", dest="hi", type=int, default=None)
    p.add_argument("--report", default=None, help="report path (default: stdout)")
    p.add_argument("--expect", default=None,
                   help="expected violation set: odd-le-25, even-lt-45, none or a comma list")
    p.add_argument("--precision", type=_precision, default=None,
                   help=f"starting precision in bits (default: ${PRECISION_ENV} or 128)")
    p.add_argument("--normalization", choices=("standard", "star_over_sqrtk"),
                   default="standard", help="A_k convention for the janoski check")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("decay", help="write D(n) and its normalization as CSV")
    p.add_argument("--from", dest="lo", type=int, default=2)
    p.add_argument("--to", dest="hi", type=int, default=2000)
    p.add_argument("--out", default=None)
    p.add_argument("--order", type=int, default=None, help="add L_k^+ and L_k^- columns")
    p.add_argument("--precision", type=_precision, default=None)
    p.set_defaults(func=cmd_decay)

    p = sub.add_parser("table", help="write p(0..N) in the table file format")
    p.add_argument("--to", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_table)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        default_precision()
        return args.func(args)
    except _UsageFailure as exc:
        _err(str(exc))
        return EXIT_USAGE
    except _IOFailure as exc:
        _err(str(exc))
        return EXIT_IO
    except ValueError as exc:
        # bad PARTCERT_PRECISION_BITS and similar configuration errors
        _err(str(exc))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
