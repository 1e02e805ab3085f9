"""Closed-form values for the worked integrals, and a runner that checks the
numerical engine against them.

Each :class:`ClosedForm` pairs a formula with the engine computation it is
supposed to equal, a validity region and a sampler for random parameters.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, SpecError
from .functions import (
    PiecewiseMonotoneFn,
    SimpleFunction,
    constant,
    exp_transform,
    identity_transform,
    monomial,
    named,
    polynomial,
    tent,
)
from .integrator import (
    classical_integral,
    integrate,
    integrate_power,
    integrate_restricted,
    integrate_via_g,
)
from .measures import DestructivePairs, LebesgueSquared, SquaredMeasure
from .quadrature import QuadratureConfig, integrate_1d
from .sets import FiniteSubset, IntervalSet

CHECK_TOL = 1e-7

LEB2 = LebesgueSquared()
DESTR34 = DestructivePairs(Fraction(3, 4))
DESTR12 = DestructivePairs(Fraction(1, 2))


@dataclass(frozen=True)
class CheckReport:
    case_id: str
    params: dict
    engine: float
    closed_form: float
    abs_diff: float
    tolerance: float
    passed: bool
    expect_pass: bool = True
    note: str = ""

    @property
    def ok(self) -> bool:
        """True when the outcome is the expected one (witnesses must fail)."""
        return self.passed == self.expect_pass

    def to_json(self) -> dict:
        d = asdict(self)
        d["ok"] = self.ok
        return d


def make_report(case_id, params, engine, closed, tol=CHECK_TOL, expect_pass=True, note="") -> CheckReport:
    diff = abs(float(engine) - float(closed))
    return CheckReport(case_id, dict(params), float(engine), float(closed), diff, tol, diff <= tol, expect_pass, note)


@dataclass(frozen=True)
class ClosedForm:
    id: str
    description: str
    evaluate: Callable[[dict], float]
    engine: Callable[[dict, QuadratureConfig], float]
    valid: Callable[[dict], bool]
    sample: Callable[[np.random.Generator], dict]
    points: tuple = ()

    def check_params(self, params: dict) -> None:
        if not self.valid(params):
            raise DomainError(f"{self.id}: parameters {params} outside the validity region")


def _upto(b) -> IntervalSet:
    return IntervalSet.between(0, b)


def _ab(p) -> IntervalSet:
    return IntervalSet.between(p["a"], p["b"])


def _uniform(rng, lo, hi):
    return float(rng.uniform(lo, hi))


def _sample_ab(rng, min_gap=0.0, max_gap=1.0):
    while True:
        a, b = sorted(rng.uniform(0, 1, 2))
        if min_gap <= b - a <= max_gap and b - a > 1e-3:
            return {"a": float(a), "b": float(b)}


# --- destructive pairs, offset 3/4 -------------------------------------------


def _destr34_x(p):
    b = p["b"]
    return b * b / 2 if b <= 0.75 else 1.5 * b - 9 / 16 - b * b / 2


def _destr34_xn(p):
    n, b = p["n"], p["b"]
    if b <= 0.75:
        return b ** (n + 1) / (n + 1)
    return (b ** (n + 1) - 2 * (b - 0.75) ** (n + 1)) / (n + 1)


# --- destructive pairs, offset 1/2 -------------------------------------------


def _destr12_x(p):
    a, b = p["a"], p["b"]
    if b - a <= 0.5:
        return (b * b - a * a) / 2
    return a * a / 2 - b * b / 2 + b - 0.25


# --- (Lebesgue)^2 ---------------------------------------------------------------


def _leb2_xn_centered(p):
    n, a = p["n"], p["a"]
    return 2 / ((n + 1) * (n + 2)) - a ** n * (1 - 2 * n * a / (n + 1) + 2 * n * a * a / (n + 2))


def _leb2_xn_ab(p):
    n, a, b = p["n"], p["a"], p["b"]
    return 2 * (b ** (n + 2) - a ** (n + 2)) / ((n + 1) * (n + 2)) - 2 * a ** (n + 1) * (b - a) / (n + 1)


def _leb2_xn_ab_direct(p):
    n, a, b = p["n"], p["a"], p["b"]
    return 2 * b ** (n + 2) / ((n + 1) * (n + 2)) - 2 * a ** (n + 1) * (b / (n + 1) - a / (n + 2))


def _leb2_exp(p):
    a, b = p["a"], p["b"]
    return 2 * (math.exp(b) - math.exp(a) - math.exp(a) * (b - a))


def _leb2_x_minus_x2(p):
    b = p["b"]
    if b <= 0.5:
        return b ** 3 / 3 - b ** 4 / 6
    return -1 / 24 + b / 3 - b * b + 5 * b ** 3 / 3 - 5 * b ** 4 / 6


def _leb2_tent(p):
    b = p["b"]
    if b <= 0.5:
        return 2 * b ** 3 / 3
    return 1 / 3 - 2 * b + 4 * b * b - 2 * b ** 3


def _restricted(fn_factory, measure, support):
    def engine(p, cfg):
        return integrate_restricted(fn_factory(p), support(p), measure, 0.0, cfg)

    return engine


def _build_catalog() -> list[ClosedForm]:
    b_unit = lambda p: 0 < p["b"] <= 1
    ab_unit = lambda p: 0 <= p["a"] < p["b"] <= 1
    n_ok = lambda p: isinstance(p["n"], int) and 1 <= p["n"] <= 8
    upto_b = lambda p: _upto(p["b"])
    x = lambda p: monomial(1)

    def deviation34(p, cfg):
        f = monomial(p["n"])
        return classical_integral(f, 0, p["b"], cfg) - integrate_restricted(f, _upto(p["b"]), DESTR34, 0.0, cfg)

    def deviation12(p, cfg):
        f = monomial(1)
        return classical_integral(f, p["a"], p["b"], cfg) - integrate_restricted(f, _ab(p), DESTR12, 0.0, cfg)

    return [
        ClosedForm(
            "destr34_x", "destructive pairs (3/4): ∫_0^b x dμ, both branches in b",
            _destr34_x, _restricted(x, DESTR34, upto_b), b_unit,
            lambda rng: {"b": _uniform(rng, 0.01, 1)},
            ({"b": 1.0}, {"b": 0.75}, {"b": 0.5}),
        ),
        ClosedForm(
            "destr34_xn", "destructive pairs (3/4): ∫_0^b x^n dμ via the power substitution",
            _destr34_xn,
            lambda p, cfg: integrate_power(monomial(1), p["n"], DESTR34, cfg, within=_upto(p["b"])),
            lambda p: b_unit(p) and n_ok(p),
            lambda rng: {"n": int(rng.integers(1, 5)), "b": _uniform(rng, 0.01, 1)},
            ({"n": 2, "b": 1.0}, {"n": 1, "b": 0.5}, {"n": 3, "b": 0.9}),
        ),
        ClosedForm(
            "destr34_deviation", "destructive pairs (3/4): ∫_0^b x^n dx - ∫_0^b x^n dμ = 2(b-3/4)^(n+1)/(n+1)",
            lambda p: 2 * (p["b"] - 0.75) ** (p["n"] + 1) / (p["n"] + 1),
            deviation34,
            lambda p: 0.75 <= p["b"] <= 1 and n_ok(p),
            lambda rng: {"n": int(rng.integers(1, 5)), "b": _uniform(rng, 0.75, 1)},
            ({"n": 1, "b": 1.0}, {"n": 3, "b": 0.9}),
        ),
        ClosedForm(
            "destr12_x", "destructive pairs (1/2): ∫_a^b x dμ, both branches in b-a",
            _destr12_x, _restricted(x, DESTR12, _ab), ab_unit,
            lambda rng: _sample_ab(rng),
            ({"a": 0.0, "b": 0.5}, {"a": 0.0, "b": 0.75}, {"a": 0.0, "b": 1.0}, {"a": 0.2, "b": 0.5}),
        ),
        ClosedForm(
            "destr12_deviation", "destructive pairs (1/2): Δ = b^2 - a^2 - b + 1/4 when b - a >= 1/2",
            lambda p: p["b"] ** 2 - p["a"] ** 2 - p["b"] + 0.25,
            deviation12,
            lambda p: ab_unit(p) and p["b"] - p["a"] >= 0.5,
            lambda rng: _sample_ab(rng, min_gap=0.5),
            ({"a": 0.1, "b": 0.6}, {"a": 0.1, "b": 0.9}),
        ),
        ClosedForm(
            "leb2_xn_centered", "(Lebesgue)^2: ∫ x^n dμ centered at a^n (the split t = a after t = λ^(1/n))",
            _leb2_xn_centered,
            lambda p, cfg: integrate(monomial(p["n"]), LEB2, p["a"] ** p["n"], cfg),
            lambda p: n_ok(p) and 0 <= p["a"] <= 1,
            lambda rng: {"n": int(rng.integers(1, 7)), "a": _uniform(rng, 0, 1)},
            tuple({"n": n, "a": 0.0} for n in range(1, 7)) + ({"n": 2, "a": 0.4},),
        ),
        ClosedForm(
            "leb2_x_centered", "(Lebesgue)^2: ∫ x dμ_a = 1/3 - a + a^2 - 2a^3/3 (change-of-variable path)",
            lambda p: 1 / 3 - p["a"] + p["a"] ** 2 - 2 * p["a"] ** 3 / 3,
            lambda p, cfg: integrate_via_g(monomial(1), identity_transform(), LEB2, p["a"], cfg),
            lambda p: 0 <= p["a"] <= 1,
            lambda rng: {"a": _uniform(rng, 0, 1)},
            ({"a": 0.0}, {"a": 0.5}),
        ),
        ClosedForm(
            "leb2_xn_ab", "(Lebesgue)^2: ∫_a^b x^n dμ",
            _leb2_xn_ab, _restricted(lambda p: monomial(p["n"]), LEB2, _ab),
            lambda p: ab_unit(p) and n_ok(p),
            lambda rng: {"n": int(rng.integers(1, 5)), **_sample_ab(rng)},
            ({"n": 1, "a": 0.3, "b": 0.9}, {"n": 4, "a": 0.3, "b": 0.9}),
        ),
        ClosedForm(
            "leb2_xn_ab_direct", "(Lebesgue)^2: ∫_a^b x^n dμ, second derivation, power path",
            _leb2_xn_ab_direct,
            lambda p, cfg: integrate_power(monomial(1), p["n"], LEB2, cfg, within=_ab(p)),
            lambda p: ab_unit(p) and n_ok(p),
            lambda rng: {"n": int(rng.integers(1, 5)), **_sample_ab(rng)},
            ({"n": 2, "a": 0.3, "b": 0.9},),
        ),
        ClosedForm(
            "leb2_const_ab", "(Lebesgue)^2: ∫_a^b 1 dμ = (b-a)^2",
            lambda p: (p["b"] - p["a"]) ** 2,
            _restricted(lambda p: constant(1.0), LEB2, _ab), ab_unit,
            lambda rng: _sample_ab(rng),
            ({"a": 0.2, "b": 0.7},),
        ),
        ClosedForm(
            "leb2_exp", "(Lebesgue)^2: ∫_a^b e^x dμ = 2[e^b - e^a - e^a(b-a)]",
            _leb2_exp, _restricted(lambda p: named("exp"), LEB2, _ab), ab_unit,
            lambda rng: _sample_ab(rng),
            ({"a": 0.0, "b": 1.0}, {"a": 0.2, "b": 0.7}),
        ),
        ClosedForm(
            "leb2_exp_via_g", "(Lebesgue)^2: ∫_a^b e^x dμ through the exp change of variable",
            _leb2_exp,
            lambda p, cfg: integrate_via_g(monomial(1), exp_transform(), LEB2, 0.0, cfg, within=_ab(p)),
            ab_unit,
            lambda rng: _sample_ab(rng),
            ({"a": 0.2, "b": 0.7},),
        ),
        ClosedForm(
            "leb2_sum_xx2", "(Lebesgue)^2: ∫_0^b (x + x^2) dμ = b^3/3 + b^4/6",
            lambda p: p["b"] ** 3 / 3 + p["b"] ** 4 / 6,
            _restricted(lambda p: polynomial([0, 1, 1]), LEB2, upto_b), b_unit,
            lambda rng: {"b": _uniform(rng, 0.01, 1)},
            ({"b": 0.8}, {"b": 1.0}),
        ),
        ClosedForm(
            "leb2_x_minus_x2", "(Lebesgue)^2: ∫_0^b (x - x^2) dμ, both branches in b",
            _leb2_x_minus_x2, _restricted(lambda p: polynomial([0, 1, -1]), LEB2, upto_b), b_unit,
            lambda rng: {"b": _uniform(rng, 0.01, 1)},
            ({"b": 1.0}, {"b": 0.4}, {"b": 0.7}),
        ),
        ClosedForm(
            "leb2_tent", "(Lebesgue)^2: ∫_0^b tent dμ, both branches in b",
            _leb2_tent, _restricted(lambda p: tent(), LEB2, upto_b), b_unit,
            lambda rng: {"b": _uniform(rng, 0.01, 1)},
            ({"b": 1.0}, {"b": 0.3}, {"b": 0.75}),
        ),
        ClosedForm(
            "leb2_cos", "(Lebesgue)^2: ∫_0^b cos x dμ = 2(1 - cos b) as published",
            lambda p: 2 * (1 - math.cos(p["b"])),
            _restricted(lambda p: named("cos"), LEB2, upto_b), b_unit,
            lambda rng: {"b": _uniform(rng, 0.01, 1)},
            ({"b": 0.8},),
        ),
        ClosedForm(
            "leb2_cos_layer_cake", "(Lebesgue)^2: ∫_0^b cos x dμ = 2(b sin b + cos b - 1) from the level sets",
            lambda p: 2 * (p["b"] * math.sin(p["b"]) + math.cos(p["b"]) - 1),
            _restricted(lambda p: named("cos"), LEB2, upto_b), b_unit,
            lambda rng: {"b": _uniform(rng, 0.01, 1)},
            ({"b": 0.8},),
        ),
        ClosedForm(
            "leb2_sin", "(Lebesgue)^2: ∫_0^b sin x dμ = 2(b - sin b)",
            lambda p: 2 * (p["b"] - math.sin(p["b"])),
            _restricted(lambda p: named("sin"), LEB2, upto_b), b_unit,
            lambda rng: {"b": _uniform(rng, 0.01, 1)},
            ({"b": 0.8},),
        ),
        ClosedForm(
            "leb2_cosh_sqrt2", "(Lebesgue)^2: ∫_0^b cosh(√2 x) dμ = cosh(√2 b) - 1",
            lambda p: math.cosh(math.sqrt(2) * p["b"]) - 1,
            _restricted(lambda p: named("cosh_sqrt2"), LEB2, upto_b), b_unit,
            lambda rng: {"b": _uniform(rng, 0.01, 1)},
            ({"b": 0.8},),
        ),
        ClosedForm(
            "leb2_half_fpp_sinh", "(Lebesgue)^2: ∫_0^b (1/2) f'' dμ = f(b) - f(0) - f'(0) b for f = sinh",
            lambda p: math.sinh(p["b"]) - p["b"],
            _restricted(lambda p: named("sinh").scaled(0.5), LEB2, upto_b), b_unit,
            lambda rng: {"b": _uniform(rng, 0.01, 1)},
            ({"b": 0.8},),
        ),
    ]


_CATALOG = _build_catalog()


def closed_form_catalog() -> list[ClosedForm]:
    return list(_CATALOG)


def catalog_entry(case_id: str) -> ClosedForm:
    for entry in _CATALOG:
        if entry.id == case_id:
            return entry
    raise SpecError("case", f"unknown case id {case_id!r}")


def verify_case(case_id: str, params: dict, cfg: Optional[QuadratureConfig] = None, tol: float = CHECK_TOL) -> CheckReport:
    """Run the engine for one catalog entry and compare with its formula."""
    entry = catalog_entry(case_id)
    entry.check_params(params)
    cfg = cfg or QuadratureConfig.from_env()
    return make_report(case_id, params, entry.engine(params, cfg), entry.evaluate(params), tol)


# --- calculus identities for (Lebesgue)^2 ------------------------------------


def integral_upto(f: PiecewiseMonotoneFn, b: float, cfg: Optional[QuadratureConfig] = None) -> float:
    """``G(b) = ∫_0^b f dμ`` for (Lebesgue)^2."""
    if b <= 0:
        return 0.0
    return integrate_restricted(f, _upto(b), LEB2, 0.0, cfg)


def ftc_second_derivative(f: PiecewiseMonotoneFn, b: float, h: float = 1e-2, cfg: Optional[QuadratureConfig] = None) -> float:
    """Half the central second difference of ``G(b) = ∫_0^b f dμ``.

    For monotone ``f`` this should reproduce ``f(b)``."""
    if not (0 < b - 2 * h and b + 2 * h < 1):
        raise DomainError(f"need 0 < b - 2h and b + 2h < 1 (b={b}, h={h})")
    g_minus, g_0, g_plus = (integral_upto(f, x, cfg) for x in (b - h, b, b + h))
    return 0.5 * (g_plus - 2 * g_0 + g_minus) / (h * h)


def ftc_double_integral(f, b: float, cfg: Optional[QuadratureConfig] = None) -> float:
    """``2 ∫_0^b ∫_0^t f(x) dx dt`` by nested quadrature."""
    cfg = cfg or QuadratureConfig.from_env()
    inner_tol = cfg.abs_tol / max(b, 1e-300) / 4

    def inner(t):
        return integrate_1d(f, 0.0, t, inner_tol, cfg.max_subdivisions, getattr(f, "breakpoints", ())).value

    outer = integrate_1d(inner, 0.0, b, cfg.abs_tol / 4, cfg.max_subdivisions, getattr(f, "breakpoints", ()))
    return 2 * outer.value


def derivative_at_zero(f: PiecewiseMonotoneFn, h: float = 1e-3, cfg: Optional[QuadratureConfig] = None) -> float:
    """Forward difference ``(G(h) - G(0)) / h`` with ``G(0) = 0``."""
    return integral_upto(f, h, cfg) / h


def decomposition_check(f: PiecewiseMonotoneFn, a: float, b: float, cfg: Optional[QuadratureConfig] = None, tol: float = CHECK_TOL) -> CheckReport:
    """``∫_a^b f dμ`` against ``G(b) - G(a) - 2(b-a) ∫_0^a f(t) dt``."""
    if not 0 <= a < b <= 1:
        raise DomainError("need 0 <= a < b <= 1")
    lhs = integrate_restricted(f, IntervalSet.between(a, b), LEB2, 0.0, cfg)
    rhs = integral_upto(f, b, cfg) - integral_upto(f, a, cfg) - 2 * (b - a) * classical_integral(f, 0, a, cfg)
    return make_report(f"decomposition[{f.name}]", {"a": a, "b": b}, lhs, rhs, tol)


def additivity_check(f: PiecewiseMonotoneFn, g: PiecewiseMonotoneFn, b: float, cfg: Optional[QuadratureConfig] = None, tol: float = CHECK_TOL, expect_pass: bool = True) -> CheckReport:
    """``∫_0^b (f+g) dμ`` against ``∫_0^b f dμ + ∫_0^b g dμ``."""
    total = integral_upto(f + g, b, cfg)
    parts = integral_upto(f, b, cfg) + integral_upto(g, b, cfg)
    return make_report(f"additivity[{f.name},{g.name}]", {"b": b}, total, parts, tol, expect_pass)


# --- witnesses that must fail ---------------------------------------------------


def nonlinearity_witness() -> CheckReport:
    """``∫ (a χ_A + b χ_B) dμ`` against ``a μ(A) + b μ(B)`` for a squared measure."""
    mu = SquaredMeasure((Fraction(1), Fraction(2)))
    A, B = FiniteSubset(2, frozenset({0})), FiniteSubset(2, frozenset({1}))
    lo, hi = Fraction(1), Fraction(3)
    f = SimpleFunction(((lo, A), (hi, B)))
    return make_report(
        "witness_nonlinearity", {"a": 1, "b": 3, "weights": [1, 2]},
        integrate(f, mu), lo * mu(A) + hi * mu(B), CHECK_TOL, expect_pass=False,
    )


def witnesses(cfg: Optional[QuadratureConfig] = None) -> list[CheckReport]:
    cfg = cfg or QuadratureConfig.from_env()
    out = [nonlinearity_witness()]
    out.append(additivity_check(monomial(1), polynomial([0, 0, -1], name="-x^2"), 1.0, cfg, expect_pass=False))
    b = 0.75
    tent_fn = tent()
    out.append(make_report(
        "witness_tent_ftc", {"b": b, "h": 1e-2},
        ftc_second_derivative(tent_fn, b, 1e-2, cfg), tent_fn(b), 1e-3, expect_pass=False,
    ))
    A, B = IntervalSet.between(0, 0.25), IntervalSet.between(0.75, 1)
    out.append(make_report(
        "witness_destr34_additivity", {"A": A.to_json(), "B": B.to_json()},
        DESTR34(A | B), DESTR34(A) + DESTR34(B), CHECK_TOL, expect_pass=False,
    ))
    return out


def run_verification(cfg: Optional[QuadratureConfig] = None, tol: float = CHECK_TOL) -> list[CheckReport]:
    """Every catalog entry at each of its canonical points, then the witnesses.

    Reports come back in catalog order."""
    cfg = cfg or QuadratureConfig.from_env()
    reports = []
    for entry in _CATALOG:
        for params in entry.points:
            reports.append(verify_case(entry.id, dict(params), cfg, tol))
    reports.extend(witnesses(cfg))
    return reports
