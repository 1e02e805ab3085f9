"""Command-line front end.

Usage:
    qint integrate --measure lebesgue2 --fn monomial:1 --to 1
    qint integrate --measure destructive:3/4 --fn monomial:1 --to 0.75
    qint integrate --measure coin:3              # exact quantum expectation
    qint coin --n-max 7 --digits 4
    qint verify --format text
    qint ftc --fn exp --b 0.5

Exit status: 0 on success, 1 when a computation fails (or a verification
check comes out wrong), 2 when the job itself is malformed.
"""
from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from typing import Optional

import click

from . import __version__
from .coin import CoinModel, format_decimal, format_fraction, ratio_table
from .errors import QIntError, SpecError
from .functions import SimpleFunction, describe, parse_function
from .integrator import integrate, integrate_restricted
from .measures import SquaredCounting, parse_measure
from .quadrature import QuadratureConfig
from .reference import closed_form_catalog, ftc_second_derivative, run_verification
from .sets import IntervalSet

COMMANDS = ("integrate", "coin", "verify", "ftc")
FORMATS = ("json", "csv", "text")


@dataclass(frozen=True)
class JobSpec:
    command: str
    measure: str = "lebesgue2"
    fn: str = "monomial:1"
    a_lo: float = 0.0
    b_hi: float = 1.0
    center: float = 0.0
    tol: Optional[float] = None
    format: str = "json"
    out: Optional[str] = None
    digits: Optional[int] = None
    n_max: int = 7
    b: float = 0.5
    h: float = 1e-2

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise SpecError("command", f"must be one of {COMMANDS}")
        if self.format not in FORMATS:
            raise SpecError("format", f"must be one of {FORMATS}")
        if not 0 <= self.a_lo < self.b_hi <= 1:
            raise SpecError("from/to", f"need 0 <= from < to <= 1, got [{self.a_lo}, {self.b_hi}]")
        if self.tol is not None and not self.tol > 0:
            raise SpecError("tol", "must be positive")
        if self.digits is not None and self.digits < 0:
            raise SpecError("digits", "must be >= 0")
        if self.command == "coin" and self.n_max < 1:
            raise SpecError("n_max", "must be >= 1")
        if self.command == "ftc" and not (0 < self.b - 2 * self.h and self.b + 2 * self.h < 1):
            raise SpecError("b", f"need 0 < b - 2h and b + 2h < 1 (b={self.b}, h={self.h})")
        if self.command in ("integrate", "ftc"):
            parse_measure(self.measure)
            if not (self.command == "integrate" and self.measure.startswith("coin")):
                parse_function(self.fn)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "JobSpec":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise SpecError(sorted(unknown)[0], "unknown job field")
        if "command" not in data:
            raise SpecError("command", "missing")
        return cls(**data)

    def config(self) -> QuadratureConfig:
        if self.tol is not None:
            return QuadratureConfig(abs_tol=self.tol)
        return QuadratureConfig.from_env()


def format_number(x, digits: Optional[int] = None) -> str:
    if isinstance(x, Fraction):
        return format_fraction(x) if digits is None else format_decimal(x, digits)
    if digits is None:
        return repr(float(x))
    return f"{float(x):.{digits}f}"


# --- jobs -------------------------------------------------------------------------


def _integrate(spec: JobSpec) -> dict:
    mu = parse_measure(spec.measure)
    if isinstance(mu, SquaredCounting):
        if spec.fn not in ("heads", "monomial:1"):
            raise SpecError("fn", "only the head count ('heads') is defined on the coin space")
        value = CoinModel(mu.flips).expectation(Fraction(spec.center).limit_denominator(10**12))
        return {"value": format_number(value, spec.digits), "exact": True, "decimal": float(value)}
    f = parse_function(spec.fn)
    cfg = spec.config()
    if isinstance(f, SimpleFunction):
        value = integrate(f, mu, spec.center, cfg)
    elif (spec.a_lo, spec.b_hi) == (0.0, 1.0):
        value = integrate(f, mu, spec.center, cfg)
    else:
        value = integrate_restricted(f, IntervalSet.between(spec.a_lo, spec.b_hi), mu, spec.center, cfg)
    return {"value": format_number(value, spec.digits), "exact": False, "decimal": float(value), "fn": describe(f)}


def _coin(spec: JobSpec) -> dict:
    digits = 10 if spec.digits is None else spec.digits
    rows = [
        {"n": n, "a_n": format_fraction(a), "ratio": r}
        for n, a, r in ratio_table(spec.n_max, digits)
    ]
    return {"rows": rows, "digits": digits}


def _verify(spec: JobSpec) -> dict:
    reports = run_verification(spec.config())
    catalog = closed_form_catalog()
    covered = {r.case_id for r in reports}
    n_covered = sum(1 for e in catalog if e.id in covered)
    return {
        "catalog_size": len(catalog),
        "catalog_covered": n_covered,
        "reports": [r.to_json() for r in reports],
        "all_ok": all(r.ok for r in reports) and n_covered == len(catalog),
    }


def _ftc(spec: JobSpec) -> dict:
    f = parse_function(spec.fn)
    if isinstance(f, SimpleFunction):
        raise SpecError("fn", "ftc needs a function on [0,1], not a simple function")
    est = ftc_second_derivative(f, spec.b, spec.h, spec.config())
    fb = float(f(spec.b))
    return {
        "b": spec.b,
        "h": spec.h,
        "half_second_difference": format_number(est, spec.digits),
        "f_b": format_number(fb, spec.digits),
        "difference": format_number(est - fb, spec.digits),
    }


_JOBS = {"integrate": _integrate, "coin": _coin, "verify": _verify, "ftc": _ftc}


# --- rendering ----------------------------------------------------------------------


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def render(spec: JobSpec, result: dict) -> str:
    if spec.format == "json":
        doc = {"qint_version": __version__, "job": spec.to_dict(), "result": result}
        return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if spec.command == "coin":
        rows = [(r["n"], r["a_n"], r["ratio"]) for r in result["rows"]]
        if spec.format == "csv":
            return _csv(("n", "a_n", "ratio_2a_n_over_n"), rows)
        width = max(len(r[1]) for r in rows)
        lines = [f"{'n':>5}  {'a_n':>{width}}  2a_n/n"]
        lines += [f"{n:>5}  {a:>{width}}  {r}" for n, a, r in rows]
        return "\n".join(lines) + "\n"
    if spec.command == "verify":
        reps = result["reports"]
        if spec.format == "csv":
            return _csv(
                ("case_id", "params", "engine", "closed_form", "abs_diff", "tolerance", "expect_pass", "ok"),
                [
                    (r["case_id"], json.dumps(r["params"], sort_keys=True), repr(r["engine"]), repr(r["closed_form"]),
                     f"{r['abs_diff']:.3e}", r["tolerance"], r["expect_pass"], r["ok"])
                    for r in reps
                ],
            )
        lines = [f"{'case':<28} {'engine':>22} {'closed form':>22} {'|diff|':>10}  result"]
        for r in reps:
            tag = "ok" if r["ok"] else "FAIL"
            if not r["expect_pass"]:
                tag += " (must differ)"
            lines.append(
                f"{r['case_id']:<28} {r['engine']:>22.15g} {r['closed_form']:>22.15g} {r['abs_diff']:>10.2e}  {tag}"
            )
        n_bad = sum(1 for r in reps if not r["ok"])
        lines.append(
            f"catalog coverage {result['catalog_covered']}/{result['catalog_size']}; "
            f"{len(reps) - n_bad}/{len(reps)} checks as expected"
        )
        return "\n".join(lines) + "\n"
    flat = {k: v for k, v in result.items() if not isinstance(v, (dict, list))}
    if spec.format == "csv":
        return _csv(tuple(flat), [tuple(flat.values())])
    return "\n".join(f"{k} = {v}" for k, v in flat.items()) + "\n"


def run(spec: JobSpec) -> tuple[int, str]:
    """Execute a job; returns ``(exit_code, document)``."""
    try:
        spec.validate()
    except SpecError as exc:
        return 2, f"error: {exc}\n"
    try:
        result = _JOBS[spec.command](spec)
    except SpecError as exc:
        return 2, f"error: {exc}\n"
    except (QIntError, ArithmeticError, ValueError) as exc:
        return 1, f"error: computation failed: {exc}\n"
    code = 0
    if spec.command == "verify" and not result["all_ok"]:
        code = 1
    return code, render(spec, result)


def _emit(spec: JobSpec) -> None:
    code, doc = run(spec)
    if code == 2 or (code == 1 and doc.startswith("error:")):
        click.echo(doc, err=True, nl=False)
    elif spec.out:
        with open(spec.out, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(doc)
    else:
        click.echo(doc, nl=False)
    sys.exit(code)


# --- click wiring ---------------------------------------------------------------------

_common = [
    click.option("--tol", type=float, default=None, envvar="QINT_TOL", help="Absolute quadrature tolerance."),
    click.option("--format", "fmt", type=click.Choice(FORMATS), default="json"),
    click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write here instead of stdout."),
    click.option("--digits", type=int, default=None, help="Fixed decimal places instead of shortest repr."),
]


def common_options(fn):
    for opt in reversed(_common):
        fn = opt(fn)
    return fn


@click.group()
@click.version_option(__version__, prog_name="qint")
def main():
    """Quantum integrals of bounded functions against q-measures."""


@main.command("integrate")
@click.option("--measure", default="lebesgue2", show_default=True,
              help="lebesgue2 | lebesgue | destructive:d | coin:n | JSON")
@click.option("--fn", "fn", default="monomial:1", show_default=True, help="Function descriptor (JSON or shorthand).")
@click.option("--from", "a_lo", type=float, default=0.0, show_default=True)
@click.option("--to", "b_hi", type=float, default=1.0, show_default=True)
@click.option("--center", type=float, default=0.0, show_default=True)
@common_options
def integrate_cmd(measure, fn, a_lo, b_hi, center, tol, fmt, out, digits):
    """Compute one (centered, restricted) quantum integral."""
    if measure.startswith("coin") and fn == "monomial:1":
        fn = "heads"
    _emit(JobSpec("integrate", measure, fn, a_lo, b_hi, center, tol, fmt, out, digits))


@main.command("coin")
@click.option("--n-max", type=int, default=7, show_default=True)
@common_options
def coin_cmd(n_max, tol, fmt, out, digits):
    """Table of exact quantum-coin expectations and 2 a_n / n."""
    _emit(JobSpec("coin", tol=tol, format=fmt, out=out, digits=digits, n_max=n_max))


@main.command("verify")
@common_options
def verify_cmd(tol, fmt, out, digits):
    """Check the engine against every closed form in the catalog."""
    _emit(JobSpec("verify", tol=tol, format=fmt, out=out, digits=digits))


@main.command("ftc")
@click.option("--fn", "fn", default="monomial:1", show_default=True)
@click.option("--b", type=float, default=0.5, show_default=True)
@click.option("--h", type=float, default=1e-2, show_default=True)
@common_options
def ftc_cmd(fn, b, h, tol, fmt, out, digits):
    """Half the second difference of b -> ∫_0^b f dμ under (Lebesgue)^2, next to f(b)."""
    _emit(JobSpec("ftc", "lebesgue2", fn, tol=tol, format=fmt, out=out, digits=digits, b=b, h=h))


if __name__ == "__main__":
    main()
