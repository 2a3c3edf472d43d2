"""Command-line front end: ``phylogf <subcommand> ...``.

Subcommands: count, leafcount, asym, table, oracle, verify.
Defaults may come from PHYLOGF_* environment variables; flags win.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time
from decimal import Decimal

from . import __version__, asym, gf, oracle
from .checks import run_checks

log = logging.getLogger("phylogf")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _env(name: str, default):
    raw = os.environ.get(f"PHYLOGF_{name}")
    if raw is None:
        return default
    if isinstance(default, int):
        try:
            return int(raw)
        except ValueError:
            raise UsageError(f"PHYLOGF_{name} must be an integer, got {raw!r}")
    return raw


def parse_range(text: str) -> list[int]:
    """'49', '1:15' (inclusive) or '7,9,11' -> list of ints."""
    try:
        if ":" in text:
            lo, hi = text.split(":", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"cannot read {text!r} as a number, list or lo:hi range")


# ---------------------------------------------------------------------------
# output


def _cell(value):
    if isinstance(value, Decimal):
        return asym.render(value)
    return value


def emit(rows: list[dict], fmt: str, out) -> None:
    rows = [{k: _cell(v) for k, v in r.items()} for r in rows]
    if fmt == "json":
        json.dump(rows, out, indent=1)
        out.write("\n")
        return
    if not rows:
        return
    fields = list(rows[0])
    if fmt == "csv":
        w = csv.DictWriter(out, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return
    widths = {f: max(len(f), *(len(str(r[f])) for r in rows)) for f in fields}
    out.write("  ".join(f.rjust(widths[f]) for f in fields) + "\n")
    for r in rows:
        out.write("  ".join(str(r[f]).rjust(widths[f]) for f in fields) + "\n")


# ---------------------------------------------------------------------------
# subcommands


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required for {args.command}")


def _ns(args) -> list[int]:
    if args.n is not None and args.n_range is not None:
        raise UsageError("give -n or --n-range, not both")
    if args.n is None and args.n_range is None:
        raise UsageError(f"{args.command} needs -n or --n-range")
    ns = [args.n] if args.n is not None else parse_range(args.n_range)
    if any(n < 1 for n in ns):
        raise UsageError("n must be positive")
    return ns


def _gf_class(args) -> str:
    if args.klass not in gf.CLASSES:
        raise UsageError(f"--class must be one of {', '.join(gf.CLASSES)} here")
    return args.klass


def _k(args, lo: int = 0) -> int:
    if not lo <= args.k <= 3:
        raise UsageError(f"-k must be in {lo}..3")
    return args.k


def cmd_count(args) -> list[dict]:
    klass, k = _gf_class(args), _k(args)
    ns = _ns(args)
    values = gf.counts(klass, k, ns)
    return [{"n": n, "count": str(c), "sci": asym.render(c)} for n, c in zip(ns, values)]


def cmd_leafcount(args) -> list[dict]:
    klass, k = _gf_class(args), _k(args)
    if args.l is None:
        raise UsageError("leafcount needs -l")
    leaves = parse_range(args.l)
    if any(x < 1 for x in leaves):
        raise UsageError("-l must be positive")
    gf.egf(klass, k, 2 * max(leaves) + 2 * k - 1)
    rows = []
    for x in leaves:
        c = gf.leaf_labeled_count(klass, k, x)
        rows.append({"l": x, "count": str(c), "sci": asym.render(c)})
    return rows


def cmd_asym(args) -> list[dict]:
    klass, k = _gf_class(args), _k(args, 1)
    rows = []
    for n in _ns(args):
        est = asym.asym_estimate(klass, k, n, args.order, args.digits, args.table_e)
        row = {"n": n, "order": args.order, "estimate": est.value}
        if est.even_n:
            row["note"] = "even n"
        rows.append(row)
    return rows


def cmd_table(args) -> list[dict]:
    klass, k = _gf_class(args), _k(args, 1)
    rows = parse_range(args.rows) if args.rows else list(asym.APPENDIX_ROWS)
    table = asym.appendix_table(klass, k, rows, args.digits, args.table_e)
    return [
        {"n": r.n, "exact": asym.render(r.exact), "first": r.first, "second": r.second}
        for r in table
    ]


def cmd_oracle(args) -> list[dict]:
    if args.klass not in oracle.ORACLE_CLASSES:
        raise UsageError(f"--class must be one of {', '.join(oracle.ORACLE_CLASSES)}")
    k = _k(args)
    rows = []
    for n in _ns(args):
        if n > args.oracle_cap:
            raise UsageError(f"n = {n} exceeds --oracle-cap {args.oracle_cap}")
        value = oracle.enumerate_count(
            n, k, args.klass, cap=args.oracle_cap, allow_double=args.allow_double
        )
        row = {"n": n, "oracle": str(value)}
        if args.klass in gf.CLASSES:
            series = gf.count(args.klass, k, n)
            row["series"] = str(series)
            row["agree"] = series == value
        rows.append(row)
    return rows


def cmd_verify(args) -> tuple[dict, bool]:
    started = time.perf_counter()
    checks = run_checks(args.level)
    ok = all(c["status"] != "fail" for c in checks)
    report = {
        "version": __version__,
        "level": args.level,
        "passed": ok,
        "seconds": round(time.perf_counter() - started, 1),
        "checks": checks,
    }
    return report, ok


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json", "plain"), default=None)
    common.add_argument("--out", help="write to this file instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    def select(p, klasses=gf.CLASSES):
        p.add_argument("--class", dest="klass", choices=klasses, default=None)
        p.add_argument("-k", type=int, default=None, help="number of reticulations")

    def sizes(p):
        p.add_argument("-n", type=int, help="number of vertices")
        p.add_argument("--n-range", help="lo:hi (inclusive) or a comma list")

    parser = argparse.ArgumentParser(
        prog="phylogf",
        description="Exact and asymptotic counts of tree-child and normal phylogenetic networks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="vertex-labeled counts n![z^n]")
    select(p)
    sizes(p)

    p = sub.add_parser("leafcount", parents=[common], help="leaf-labeled counts")
    select(p)
    p.add_argument("-l", help="number of leaves: a value, list or lo:hi range")

    p = sub.add_parser("asym", parents=[common], help="first/second-order estimates")
    select(p)
    sizes(p)
    p.add_argument("--order", type=int, choices=(1, 2), default=2)
    p.add_argument("--digits", type=int, default=None)
    p.add_argument("--table-e", action="store_true", help="use e = 2.718281828 as the printed tables did")

    p = sub.add_parser("table", parents=[common], help="exact counts next to both estimates")
    select(p)
    p.add_argument("--rows", help="row list (default 7^2, 9^2, ..., 31^2)")
    p.add_argument("--digits", type=int, default=None)
    p.add_argument("--table-e", action="store_true", help="use e = 2.718281828 as the printed tables did")

    p = sub.add_parser("oracle", parents=[common], help="brute-force enumeration for small n")
    select(p, oracle.ORACLE_CLASSES)
    sizes(p)
    p.add_argument("--oracle-cap", type=int, default=None)
    p.add_argument(
        "--allow-double", action="store_true", help="let class 'all' include double edges"
    )

    p = sub.add_parser("verify", parents=[common], help="run the cross-check suites")
    p.add_argument("level", nargs="?", choices=("fast", "full"), default="fast")
    return parser


def _fill_defaults(args) -> None:
    if args.format is None:
        args.format = _env("FORMAT", "json" if args.command == "verify" else "csv")
        if args.format not in ("csv", "json", "plain"):
            raise UsageError(f"PHYLOGF_FORMAT must be csv, json or plain, got {args.format!r}")
    if hasattr(args, "klass") and args.klass is None:
        args.klass = _env("CLASS", None)
        if args.klass is None:
            raise UsageError(f"{args.command} needs --class")
    if hasattr(args, "k") and args.k is None:
        args.k = _env("K", None)
        if args.k is None:
            raise UsageError(f"{args.command} needs -k")
        try:
            args.k = int(args.k)
        except ValueError:
            raise UsageError("PHYLOGF_K must be an integer")
    if hasattr(args, "digits") and args.digits is None:
        args.digits = _env("DIGITS", asym.DEFAULT_DIGITS)
    if hasattr(args, "digits") and args.digits < 10:
        raise UsageError("--digits must be at least 10")
    if hasattr(args, "oracle_cap") and args.oracle_cap is None:
        args.oracle_cap = _env("ORACLE_CAP", oracle.DEFAULT_CAP)


COMMANDS = {
    "count": cmd_count,
    "leafcount": cmd_leafcount,
    "asym": cmd_asym,
    "table": cmd_table,
    "oracle": cmd_oracle,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        _fill_defaults(args)
        buf = io.StringIO()
        status = EXIT_OK
        if args.command == "verify":
            report, ok = cmd_verify(args)
            status = EXIT_OK if ok else EXIT_FAIL
            if args.format == "json":
                json.dump(report, buf, indent=1)
                buf.write("\n")
            else:
                emit(
                    [
                        {"check": c["name"], "status": c["status"], "detail": c.get("detail", "")}
                        for c in report["checks"]
                    ],
                    args.format,
                    buf,
                )
            if not ok:
                first = next(c for c in report["checks"] if c["status"] == "fail")
                print(f"verify: {first['name']} failed: {first.get('detail', '')}", file=sys.stderr)
        else:
            emit(COMMANDS[args.command](args), args.format, buf)
    except (UsageError, gf.UnsupportedK, oracle.OracleLimitExceeded) as exc:
        parser.print_usage(sys.stderr)
        print(f"phylogf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return status


if __name__ == "__main__":
    sys.exit(main())
