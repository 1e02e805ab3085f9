from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qint import (
    DestructivePairs,
    DomainError,
    FiniteSubset,
    IntervalSet,
    LebesgueSquared,
    PlainLebesgue,
    SpecError,
    SquaredCounting,
    SquaredMeasure,
    grade2_residual,
    measure,
    parse_measure,
)
from qint.measures import RestrictedMeasure, measure_from_json

F = Fraction
D34 = DestructivePairs(F(3, 4))
D12 = DestructivePairs(F(1, 2))
UNIT_MEASURES = [LebesgueSquared(), PlainLebesgue(), D34, D12, DestructivePairs(0.6), DestructivePairs(1)]

unit = st.floats(0, 1, allow_nan=False)
interval_sets = st.lists(st.tuples(unit, unit), max_size=5).map(
    lambda pairs: IntervalSet([(min(p), max(p)) for p in pairs])
)


def between(lo, hi):
    return IntervalSet.between(F(lo), F(hi))


def test_destructive_three_quarters_values():
    assert D34(between(0, 1)) == F(1, 2)
    assert D34(between(0, F(3, 4))) == F(3, 4)


def test_destructive_half_values():
    assert D12(between(0, 1)) == 0
    assert D12(between(0, F(1, 2))) == F(1, 2)
    assert D12(between(F(1, 6), F(5, 6))) == F(1, 3)
    # The set as printed next to the value 1/3 actually measures 11/48.
    assert D12(between(F(1, 16), F(5, 6))) == F(11, 48)


def test_lebesgue_squared_interval():
    assert LebesgueSquared()(between(F(1, 5), F(7, 10))) == F(1, 4)
    assert measure(LebesgueSquared(), IntervalSet.between(0.2, 0.7)) == pytest.approx(0.25)


def test_coin_two_flips():
    mu = SquaredCounting(2)
    assert mu(FiniteSubset(4, frozenset({0, 1, 2}))) == F(9, 16)
    assert mu.total == 1


def test_squared_weights():
    mu = SquaredMeasure((F(1), F(2), F(3)))
    assert mu(FiniteSubset(3, frozenset({0, 2}))) == 16


def test_offset_below_half_rejected():
    with pytest.raises(DomainError):
        DestructivePairs(0.4)
    with pytest.raises(DomainError):
        DestructivePairs(1.2)


def test_domain_mismatch():
    with pytest.raises(DomainError):
        LebesgueSquared()(FiniteSubset(2, frozenset({0})))
    with pytest.raises(DomainError):
        SquaredCounting(2)(FiniteSubset(8, frozenset({0})))
    with pytest.raises(DomainError):
        SquaredCounting(2)(IntervalSet.unit())


def test_additivity_fails_for_destructive_pairs():
    a, b = between(0, F(1, 4)), between(F(3, 4), 1)
    assert D34(a | b) == 0
    assert D34(a) + D34(b) == F(1, 2)


def test_restricted_measure():
    support = between(0, F(1, 2))
    mu = LebesgueSquared().restrict(support)
    assert isinstance(mu, RestrictedMeasure)
    assert mu(between(F(1, 4), 1)) == F(1, 16)
    assert mu.whole() == support


def test_grade2_example_destructive():
    a = IntervalSet.between(0, 0.1)
    b = IntervalSet.between(0.2, 0.3)
    c = IntervalSet.between(0.8, 0.95)
    assert abs(grade2_residual(D34, a, b, c)) <= 1e-12


def test_grade2_needs_disjoint_sets():
    with pytest.raises(DomainError):
        grade2_residual(LebesgueSquared(), IntervalSet.between(0, 0.5), IntervalSet.between(0.4, 0.6), IntervalSet.empty())


@pytest.mark.parametrize("mu", UNIT_MEASURES, ids=lambda m: m.kind + str(getattr(m, "offset", "")))
@given(cuts=st.lists(unit, min_size=6, max_size=6))
def test_grade2_residual_vanishes(mu, cuts):
    cuts = sorted(cuts)
    sets = [IntervalSet.between(cuts[2 * i], cuts[2 * i + 1]) for i in range(3)]
    assert abs(grade2_residual(mu, *sets)) <= 1e-12


@given(labels=st.lists(st.integers(0, 3), min_size=8, max_size=8))
def test_grade2_residual_finite(labels):
    sets = [FiniteSubset(8, frozenset(i for i, l in enumerate(labels) if l == k)) for k in range(3)]
    assert grade2_residual(SquaredCounting(3), *sets) == 0
    assert grade2_residual(SquaredMeasure(tuple(F(i + 1, 3) for i in range(8))), *sets) == 0


@pytest.mark.parametrize("mu", UNIT_MEASURES, ids=lambda m: m.kind + str(getattr(m, "offset", "")))
@given(a=interval_sets)
def test_nonnegative_and_empty_is_zero(mu, a):
    assert mu(IntervalSet.empty()) == 0
    assert mu(a) >= -1e-15


def test_destructive_pairs_against_grid_count():
    # Count midpoint cells x with x and x + 3/4 both in A.
    a = IntervalSet([(0.05, 0.4), (0.7, 0.95)])
    xs = (np.arange(400_000) + 0.5) / 400_000
    inside = np.zeros_like(xs, dtype=bool)
    for lo, hi in a:
        inside |= (xs >= lo) & (xs < hi)
    shifted = np.zeros_like(inside)
    shifted[: -300_000] = inside[300_000:]
    approx = inside.mean() - 2 * (inside & shifted).mean()
    assert D34(a) == pytest.approx(approx, abs=1e-5)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("lebesgue2", LebesgueSquared()),
        ("lebesgue", PlainLebesgue()),
        ("destructive:3/4", D34),
        ("destructive:0.5", D12),
        ("coin:3", SquaredCounting(3)),
        ('{"kind": "destructive", "offset": 0.75}', D34),
    ],
)
def test_parse_measure(text, expected):
    assert parse_measure(text) == expected


@pytest.mark.parametrize("text", ["bogus", "destructive:0.2", "coin:x", "{not json", '{"kind": "nope"}'])
def test_parse_measure_errors_name_field(text):
    with pytest.raises(SpecError) as info:
        parse_measure(text)
    assert info.value.field == "measure"


@pytest.mark.parametrize("mu", [LebesgueSquared(), PlainLebesgue(), D34, SquaredCounting(2)])
def test_json_round_trip(mu):
    assert measure_from_json(mu.to_json()) == mu
