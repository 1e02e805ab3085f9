import math
import zlib

import numpy as np
import pytest

from qint import DomainError, SpecError, monomial, named, polynomial, tent
from qint.reference import (
    CHECK_TOL,
    additivity_check,
    catalog_entry,
    closed_form_catalog,
    decomposition_check,
    derivative_at_zero,
    ftc_double_integral,
    ftc_second_derivative,
    integral_upto,
    run_verification,
    verify_case,
    witnesses,
)

CATALOG = closed_form_catalog()
IDS = [e.id for e in CATALOG]


def test_catalog_shape():
    assert len(CATALOG) >= 16
    assert len(set(IDS)) == len(IDS)
    for entry in CATALOG:
        assert entry.points, entry.id
        for p in entry.points:
            assert entry.valid(p), (entry.id, p)


@pytest.mark.parametrize("case_id", IDS)
def test_catalog_entry_matches_engine_at_25_random_points(case_id):
    entry = catalog_entry(case_id)
    rng = np.random.default_rng(zlib.crc32(case_id.encode()))
    worst = 0.0
    for _ in range(25):
        p = entry.sample(rng)
        assert entry.valid(p)
        rep = verify_case(case_id, p)
        worst = max(worst, rep.abs_diff)
    assert worst <= CHECK_TOL, f"{case_id}: max |engine - closed form| = {worst:.3e}"


@pytest.mark.parametrize(
    "case_id, params, want",
    [
        ("destr34_x", {"b": 0.75}, 9 / 32),
        ("destr12_x", {"a": 0.0, "b": 0.75}, 7 / 32),
        ("leb2_x_minus_x2", {"b": 1.0}, 1 / 8),
        ("leb2_exp", {"a": 0.0, "b": 1.0}, 2 * (math.e - 2)),
        ("destr34_xn", {"n": 1, "b": 0.5}, 0.125),
        ("destr34_xn", {"n": 2, "b": 1.0}, 31 / 96),
        ("leb2_tent", {"b": 1.0}, 1 / 3),
    ],
)
def test_worked_values(case_id, params, want):
    entry = catalog_entry(case_id)
    assert entry.evaluate(params) == pytest.approx(want, abs=1e-15)
    assert verify_case(case_id, params).passed


def test_example_sum_is_additive():
    b = 0.8
    rep = verify_case("leb2_sum_xx2", {"b": b})
    assert rep.passed
    parts = integral_upto(monomial(1), b) + integral_upto(monomial(2), b)
    assert rep.engine == pytest.approx(parts, abs=1e-9)


def test_verify_case_errors():
    with pytest.raises(SpecError):
        verify_case("no_such_case", {})
    with pytest.raises(DomainError):
        verify_case("destr34_deviation", {"n": 1, "b": 0.5})


# --- branch continuity and deviation formulas ----------------------------------------

EPS = 1e-9


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_destructive_three_quarters_branches_meet(n):
    f = catalog_entry("destr34_xn").evaluate
    assert f({"n": n, "b": 0.75 - EPS}) == pytest.approx(f({"n": n, "b": 0.75 + EPS}), abs=1e-8)


@pytest.mark.parametrize("a", [0.0, 0.1, 0.3, 0.5])
def test_destructive_half_branches_meet(a):
    f = catalog_entry("destr12_x").evaluate
    b = a + 0.5
    assert f({"a": a, "b": b - EPS}) == pytest.approx(f({"a": a, "b": b + EPS}), abs=1e-8)


@pytest.mark.parametrize("case_id", ["leb2_x_minus_x2", "leb2_tent"])
def test_lebesgue_squared_branches_meet(case_id):
    f = catalog_entry(case_id).evaluate
    assert f({"b": 0.5 - EPS}) == pytest.approx(f({"b": 0.5 + EPS}), abs=1e-8)


def test_destructive_deviation_grows_towards_one():
    entry = catalog_entry("destr34_deviation")
    for n in (1, 2, 3):
        devs = [entry.engine({"n": n, "b": b}, None) for b in (0.8, 0.9, 1.0)]
        assert devs[0] < devs[1] < devs[2]
        assert devs[2] == pytest.approx(2 * 0.25 ** (n + 1) / (n + 1), abs=1e-9)


@pytest.mark.parametrize("a", [0.0, 0.2, 0.45])
def test_destructive_half_deviation_vanishes_only_at_half(a):
    entry = catalog_entry("destr12_deviation")
    assert entry.engine({"a": a, "b": a + 0.5}, None) == pytest.approx(0, abs=1e-9)
    assert entry.evaluate({"a": a, "b": a + 0.5}) == pytest.approx(0, abs=1e-15)
    if a + 0.6 <= 1:
        assert entry.engine({"a": a, "b": a + 0.6}, None) > 1e-3
    # Extending the formula to b = a + 0.4 gives a nonzero value.
    assert entry.evaluate({"a": 0.3, "b": 0.7}) != 0


# --- calculus identities -----------------------------------------------------------------

FTC_FUNCTIONS = [monomial(n) for n in range(1, 5)] + [named("exp"), named("cos"), named("sin")]


@pytest.mark.parametrize("f", FTC_FUNCTIONS, ids=lambda f: f.name)
@pytest.mark.parametrize("b", [0.3, 0.5, 0.8])
def test_half_second_derivative_recovers_f(f, b):
    assert ftc_second_derivative(f, b, 1e-2) == pytest.approx(f(b), abs=1e-3)


def test_tent_breaks_the_identity():
    b = 0.75
    est = ftc_second_derivative(tent(), b, 1e-2)
    assert est == pytest.approx(4 - 6 * b, abs=1e-3)
    assert abs(est - tent()(b)) == pytest.approx(1.0, abs=1e-3)


def test_second_difference_domain():
    with pytest.raises(DomainError):
        ftc_second_derivative(monomial(1), 0.01, 1e-2)


@pytest.mark.parametrize(
    "name, closed",
    [
        ("cos", lambda b: 2 * (1 - math.cos(b))),
        ("sin", lambda b: 2 * (b - math.sin(b))),
        ("cosh_sqrt2", lambda b: math.cosh(math.sqrt(2) * b) - 1),
    ],
)
@pytest.mark.parametrize("b", [0.3, 0.8, 1.0])
def test_double_integral_values(name, closed, b):
    assert ftc_double_integral(named(name), b) == pytest.approx(closed(b), abs=1e-9)


@pytest.mark.parametrize("f", [monomial(1), named("exp"), named("cos")], ids=lambda f: f.name)
def test_derivative_at_zero_vanishes(f):
    h = 1e-3
    assert abs(derivative_at_zero(f, h)) <= 10 * h


@pytest.mark.parametrize("f", [monomial(n) for n in range(1, 5)], ids=lambda f: f.name)
def test_decomposition_monomials(f):
    rep = decomposition_check(f, 0.3, 0.9)
    assert rep.passed
    n = int(f.name.split(":")[1])
    assert rep.engine == pytest.approx(catalog_entry("leb2_xn_ab").evaluate({"n": n, "a": 0.3, "b": 0.9}), abs=1e-7)


def test_decomposition_exp():
    rep = decomposition_check(named("exp"), 0.2, 0.7)
    assert rep.passed
    assert rep.engine == pytest.approx(catalog_entry("leb2_exp").evaluate({"a": 0.2, "b": 0.7}), abs=1e-7)


def test_decomposition_from_zero():
    rep = decomposition_check(named("exp"), 0.0, 0.6)
    assert rep.passed and rep.engine == pytest.approx(integral_upto(named("exp"), 0.6), abs=1e-12)


def test_additivity_for_increasing_pairs():
    assert additivity_check(monomial(1), monomial(2), 1.0).passed
    assert additivity_check(named("exp"), named("sin"), 0.7).passed
    doubled = integral_upto(monomial(1).scaled(2), 0.6)
    assert doubled == pytest.approx(2 * integral_upto(monomial(1), 0.6), abs=1e-9)


def test_additivity_for_decreasing_pairs():
    assert additivity_check(named("cos"), polynomial([1, -1]), 0.9).passed


def test_additivity_fails_for_mixed_sum():
    rep = additivity_check(monomial(1), polynomial([0, 0, -1]), 1.0, expect_pass=False)
    assert not rep.passed and rep.ok
    assert rep.engine == pytest.approx(1 / 8, abs=1e-9)
    assert rep.closed_form == pytest.approx(1 / 6, abs=1e-9)


def test_witnesses_behave():
    reps = witnesses()
    assert len(reps) == 4
    assert all(r.ok and not r.passed for r in reps)


def test_verification_covers_catalog_in_order():
    reps = run_verification()
    seen = []
    for r in reps:
        if r.case_id in IDS and r.case_id not in seen:
            seen.append(r.case_id)
    assert seen == IDS
    assert reps[-4:] == witnesses()
