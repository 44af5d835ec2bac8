"""Command-line interface.

Subcommands::

    table   pmf table for one (k, lambda) up to n_max
    exact   exact polynomial for a single p_n
    verify  cross-engine equality and structural facts over a (k, n) grid
    census  generated-term counts of the KM and Alt sums
    bench   timing of polynomial construction per engine

Exit codes: 0 success, 1 engine error, 2 invalid arguments, 3 verification
mismatch.
"""
from __future__ import annotations

import argparse
import csv
import json
import statistics
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .engines import MethodKind, pmf_polynomial, term_census, term_count
from .errors import PoissonKError
from .evaluate import evaluate_pmf_exact, pmf_table
from .exact_core import LambdaPolynomial, OrderKParams, factorial

EXIT_OK = 0
EXIT_ENGINE = 1
EXIT_CONFIG = 2
EXIT_MISMATCH = 3

DEFAULT_K_RANGE = "1-6"
DEFAULT_N_MAX = 60


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument parsing helpers
# ---------------------------------------------------------------------------


def parse_k_range(text: str) -> list[int]:
    """Parse ``"2"``, ``"1-6"`` or ``"1,3,5"`` into a sorted list of orders."""
    ks: set[int] = set()
    try:
        for part in text.split(","):
            part = part.strip()
            if "-" in part:
                lo, hi = (int(x) for x in part.split("-", 1))
                ks.update(range(lo, hi + 1))
            else:
                ks.add(int(part))
    except ValueError:
        raise ConfigError(f"cannot parse k range {text!r}") from None
    if not ks or min(ks) < 1:
        raise ConfigError(f"orders must be >= 1, got {text!r}")
    return sorted(ks)


def parse_methods(text: str) -> list[MethodKind]:
    methods = []
    for part in text.split(","):
        try:
            method = MethodKind.parse(part)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if method not in methods:
            methods.append(method)
    return methods


def parse_lambda(text: str) -> Fraction:
    try:
        lam = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"lambda must be a decimal number, got {text!r}") from None
    if lam <= 0:
        raise ConfigError(f"lambda must be > 0, got {text}")
    return lam


def _check_k2(methods: Sequence[MethodKind], ks: Sequence[int]) -> None:
    if MethodKind.K2 in methods and any(k != 2 for k in ks):
        raise ConfigError("method k2 requires k=2")


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _csv_writer(out):
    return csv.writer(out, lineterminator="\n")


# ---------------------------------------------------------------------------
# table / exact
# ---------------------------------------------------------------------------


def cmd_table(args, out) -> int:
    (k,) = _single_k(args.k)
    method = parse_methods(args.method)[0]
    _check_k2([method], [k])
    lam = parse_lambda(args.lam)
    table = pmf_table(OrderKParams(k, float(lam)), args.n_max, method)
    rows = zip(table.entries, table.cumulatives)
    if args.format == "json":
        out.write(json.dumps(table.to_dict()) + "\n")
    elif args.format == "csv":
        writer = _csv_writer(out)
        writer.writerow(["n", "probability", "log_probability", "cumulative"])
        for e, c in rows:
            writer.writerow([e.n, repr(e.probability), repr(e.log_probability), repr(c)])
    else:
        out.write(f"# k={k} lambda={args.lam} method={method}\n")
        out.write(f"{'n':>5}  {'probability':>24}  {'log_probability':>24}  {'cumulative':>24}\n")
        for e, c in rows:
            out.write(f"{e.n:>5}  {e.probability:>24.17g}  {e.log_probability:>24.17g}  {c:>24.17g}\n")
    return EXIT_OK


def _single_k(text: str) -> list[int]:
    ks = parse_k_range(text)
    if len(ks) != 1:
        raise ConfigError("this command takes a single order k")
    return ks


def cmd_exact(args, out) -> int:
    (k,) = _single_k(args.k)
    method = parse_methods(args.method)[0]
    _check_k2([method], [k])
    lam = parse_lambda(args.lam) if args.lam is not None else None
    poly = pmf_polynomial(method, k, args.n)
    value = None
    if lam is not None:
        value = evaluate_pmf_exact(poly, k, lam, dps=args.digits + 10)
    if args.format == "json":
        doc = {"k": k, "n": args.n, "method": method.value, "polynomial": poly.to_dict()}
        if lam is not None:
            doc["lambda"] = args.lam
            doc["probability"] = _mp_str(value, args.digits)
        out.write(json.dumps(doc, separators=(",", ":"), ensure_ascii=False) + "\n")
    else:
        out.write(poly.to_text(ascii=args.ascii) + "\n")
        if lam is not None:
            out.write(f"p_{args.n} = {_mp_str(value, args.digits)}\n")
    return EXIT_OK


def _mp_str(value, digits: int) -> str:
    import mpmath

    return mpmath.nstr(value, digits)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


@dataclass
class FactResult:
    name: str
    checked: int = 0
    counterexample: str | None = None

    @property
    def passed(self) -> bool:
        return self.counterexample is None

    def record(self, ok: bool, detail: Callable[[], str]) -> None:
        self.checked += 1
        if not ok and self.counterexample is None:
            self.counterexample = detail()


@dataclass
class VerifyReport:
    ks: list[int]
    n_max: int
    methods: list[MethodKind]
    facts: list[FactResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(f.passed for f in self.facts)


def verify_grid(ks: Sequence[int], n_max: int, methods: Sequence[MethodKind]) -> VerifyReport:
    """Check engine agreement and the structural facts of every p_n.

    For n >= 1 the polynomial has degree n, leading coefficient 1/n!, no
    constant term, lowest degree (n-1)//k + 1, and positive coefficients;
    p_0 is the constant 1.
    """
    names = "=".join(m.value for m in methods)
    equal = FactResult(f"engines agree ({names})")
    p0 = FactResult("p_0 = 1")
    degree = FactResult("degree = n")
    leading = FactResult("leading coefficient = 1/n!")
    constant = FactResult("no constant term")
    lowest = FactResult("lowest degree = (n-1)//k + 1")
    positive = FactResult("all coefficients positive")
    report = VerifyReport(list(ks), n_max, list(methods),
                          [equal, p0, degree, leading, constant, lowest, positive])

    for k in ks:
        for n in range(n_max + 1):
            polys = {m: pmf_polynomial(m, k, n) for m in methods}
            ref_method = methods[0]
            ref = polys[ref_method]
            for m, p in polys.items():
                if m is ref_method:
                    continue
                equal.record(p == ref, lambda: f"k={k} n={n}: {ref_method}={ref} but {m}={p}")
            for m, p in polys.items():
                where = f"k={k} n={n} {m}"
                if n == 0:
                    p0.record(p == LambdaPolynomial.constant(1), lambda: f"{where}: {p}")
                    continue
                degree.record(p.degree() == n, lambda: f"{where}: degree {p.degree()}")
                leading.record(
                    p.coefficient(n) == Fraction(1, factorial(n)),
                    lambda: f"{where}: coefficient of lambda^{n} is {p.coefficient(n)}",
                )
                constant.record(p.coefficient(0) == 0, lambda: f"{where}: constant {p.coefficient(0)}")
                expected_low = (n - 1) // k + 1
                lowest.record(
                    not p.is_zero() and p.min_degree() == expected_low,
                    lambda: f"{where}: lowest degree {p.min_degree() if not p.is_zero() else None}, "
                    f"expected {expected_low}",
                )
                positive.record(
                    all(c > 0 for _, c in p.terms()), lambda: f"{where}: {p}"
                )
    return report


def cmd_verify(args, out) -> int:
    ks = parse_k_range(args.k)
    methods = parse_methods(args.methods)
    _check_k2(methods, ks)
    report = verify_grid(ks, args.n_max, methods)
    if args.format == "json":
        doc = {
            "k": report.ks,
            "n_max": report.n_max,
            "methods": [m.value for m in report.methods],
            "passed": report.passed,
            "facts": [
                {"name": f.name, "passed": f.passed, "checked": f.checked,
                 "counterexample": f.counterexample}
                for f in report.facts
            ],
        }
        out.write(json.dumps(doc, ensure_ascii=False) + "\n")
    elif args.format == "csv":
        writer = _csv_writer(out)
        writer.writerow(["fact", "status", "checked", "counterexample"])
        for f in report.facts:
            writer.writerow([f.name, "PASS" if f.passed else "FAIL", f.checked, f.counterexample or ""])
    else:
        out.write(f"# k={_fmt_ks(report.ks)} n=0..{report.n_max}\n")
        for f in report.facts:
            line = f"{'PASS' if f.passed else 'FAIL'}  {f.name}  ({f.checked} checks)"
            if not f.passed:
                line += f"\n      first counterexample: {f.counterexample}"
            out.write(line + "\n")
        out.write("PASS\n" if report.passed else "FAIL\n")
    return EXIT_OK if report.passed else EXIT_MISMATCH


def _fmt_ks(ks: Sequence[int]) -> str:
    if list(ks) == list(range(ks[0], ks[-1] + 1)) and len(ks) > 1:
        return f"{ks[0]}..{ks[-1]}"
    return ",".join(map(str, ks))


# ---------------------------------------------------------------------------
# census
# ---------------------------------------------------------------------------


def census_rows(ks: Sequence[int], n_max: int, methods: Sequence[MethodKind]) -> list[dict]:
    rows = []
    for k in ks:
        for n in range(1, n_max + 1):
            row: dict = {"k": k, "n": n, "r": (n - 1) // k}
            for m in methods:
                c = term_census(m, k, n)
                row[f"{m.value}_total"] = c.total_terms
                row[f"{m.value}_low"] = c.low_degree_terms
            if MethodKind.KM in methods:
                row["savings_ratio"] = row["km_low"] / row["km_total"]
            rows.append(row)
    return rows


def census_summary(rows: Sequence[dict], methods: Sequence[MethodKind]) -> dict:
    summary: dict = {"cells": len(rows)}
    for m in methods:
        summary[f"{m.value}_total"] = sum(r[f"{m.value}_total"] for r in rows)
        summary[f"{m.value}_low"] = sum(r[f"{m.value}_low"] for r in rows)
    if MethodKind.KM in methods and summary["km_total"]:
        summary["savings_ratio"] = summary["km_low"] / summary["km_total"]
    return summary


def cmd_census(args, out) -> int:
    ks = parse_k_range(args.k)
    methods = parse_methods(args.methods)
    bad = [m.value for m in methods if m not in (MethodKind.KM, MethodKind.ALT)]
    if bad:
        raise ConfigError(f"census compares km and alt only, got {','.join(bad)}")
    rows = census_rows(ks, args.n_max, methods)
    summary = census_summary(rows, methods)
    if args.format == "json":
        out.write(json.dumps({"rows": rows, "summary": summary}) + "\n")
        return EXIT_OK
    columns = list(rows[0]) if rows else ["k", "n", "r"]
    if args.format == "csv":
        writer = _csv_writer(out)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row[c]) for c in columns])
        print("summary: " + _summary_text(summary), file=sys.stderr)
    else:
        out.write("  ".join(f"{c:>13}" for c in columns) + "\n")
        for row in rows:
            out.write("  ".join(f"{_cell(row[c]):>13}" for c in columns) + "\n")
        out.write("summary: " + _summary_text(summary) + "\n")
    return EXIT_OK


def _cell(value) -> str:
    return f"{value:.6f}" if isinstance(value, float) else str(value)


def _summary_text(summary: dict) -> str:
    return " ".join(f"{key}={_cell(value)}" for key, value in summary.items())


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------


def bench_rows(ks, n_values, methods, repeat: int) -> list[dict]:
    rows = []
    for k in ks:
        for n in n_values:
            for m in methods:
                samples = []
                for _ in range(repeat):
                    start = time.perf_counter_ns()
                    pmf_polynomial(m, k, n)
                    samples.append(time.perf_counter_ns() - start)
                rows.append({
                    "method": m.value,
                    "k": k,
                    "n": n,
                    "median_ns": int(statistics.median(samples)),
                    "term_count": term_count(m, k, n),
                })
    return rows


def cmd_bench(args, out) -> int:
    ks = parse_k_range(args.k)
    methods = parse_methods(args.methods)
    _check_k2(methods, ks)
    n_values = list(range(args.n_min, args.n_max + 1, args.n_step))
    rows = bench_rows(ks, n_values, methods, args.repeat)
    columns = ["method", "k", "n", "median_ns", "term_count"]
    if args.format == "json":
        out.write(json.dumps({"rows": rows}) + "\n")
    elif args.format == "csv":
        writer = _csv_writer(out)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([row[c] for c in columns])
    else:
        out.write("  ".join(f"{c:>10}" for c in columns) + "\n")
        for row in rows:
            out.write("  ".join(f"{row[c]!s:>10}" for c in columns) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poissonk",
        description="Exact pmf polynomials of the Poisson distribution of order k.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p, default):
        p.add_argument("--format", choices=["json", "csv", "text"], default=default)

    p = sub.add_parser("table", help="pmf table for n = 0..n_max")
    p.add_argument("--k", required=True)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--n-max", type=_non_negative, required=True)
    p.add_argument("--method", default="alt")
    add_format(p, "text")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("exact", help="exact polynomial for p_n")
    p.add_argument("--k", required=True)
    p.add_argument("--n", type=_non_negative, required=True)
    p.add_argument("--method", default="alt")
    p.add_argument("--lambda", dest="lam", default=None,
                   help="also print exp(-k*lambda)*p_n at this exact rate")
    p.add_argument("--digits", type=_positive, default=30)
    p.add_argument("--ascii", action="store_true", help="write L instead of λ")
    add_format(p, "text")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("verify", help="check engine agreement and structural facts")
    p.add_argument("--k", default=DEFAULT_K_RANGE, help="order, range a-b, or list (default 1-6)")
    p.add_argument("--n-max", type=_non_negative, default=DEFAULT_N_MAX)
    p.add_argument("--methods", default="oracle,km,alt")
    add_format(p, "text")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("census", help="count generated terms of the km and alt sums")
    p.add_argument("--k", default=DEFAULT_K_RANGE)
    p.add_argument("--n-max", type=_non_negative, default=DEFAULT_N_MAX)
    p.add_argument("--methods", default="km,alt")
    add_format(p, "text")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("bench", help="time polynomial construction per engine")
    p.add_argument("--k", default="2")
    p.add_argument("--n-min", type=_positive, default=10)
    p.add_argument("--n-max", type=_non_negative, default=200)
    p.add_argument("--n-step", type=_positive, default=10)
    p.add_argument("--methods", default="km,alt")
    p.add_argument("--repeat", type=_positive, default=5)
    add_format(p, "csv")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except ConfigError as exc:
        print(f"poissonk {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PoissonKError, ValueError) as exc:
        print(f"poissonk {args.command}: {exc}", file=sys.stderr)
        return EXIT_ENGINE


if __name__ == "__main__":
    sys.exit(main())
