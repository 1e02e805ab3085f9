from fractions import Fraction

import pytest

from qint import CoinModel, DestructivePairs, IntervalSet, LebesgueSquared, PlainLebesgue, SquaredMeasure, constant, monomial
from qint.oracle import plateau_sum, riemann_sum_oracle

from corpus import ORACLE_CORPUS


def test_identity_under_lebesgue_squared():
    assert riemann_sum_oracle(monomial(1), LebesgueSquared(), grid_size=10**5) == pytest.approx(1 / 3, abs=1e-4)


@pytest.mark.parametrize("mu", [LebesgueSquared(), PlainLebesgue(), DestructivePairs(0.75)])
@pytest.mark.parametrize("n", [10, 1000])
def test_on_grid_constant_is_exact(mu, n):
    assert riemann_sum_oracle(constant(0.5), mu, grid_size=n) == pytest.approx(0.5 * float(mu.total), abs=1e-12)


def test_coin_plateaus():
    model = CoinModel(3)
    assert plateau_sum(model.heads(), model.measure) == Fraction(33, 32)


def test_destructive_restricted_values():
    d = DestructivePairs(Fraction(3, 4))
    got = riemann_sum_oracle(monomial(1), d, within=IntervalSet.between(0, 0.75), grid_size=10**5)
    assert got == pytest.approx(9 / 32, abs=1e-4)
    assert riemann_sum_oracle(monomial(1), d.restrict(IntervalSet.between(0, 0.75)), grid_size=10**5) == pytest.approx(got)


def test_rejects_small_grid_and_unknown_measures():
    with pytest.raises(ValueError):
        riemann_sum_oracle(monomial(1), LebesgueSquared(), grid_size=5)
    with pytest.raises(ValueError):
        riemann_sum_oracle(monomial(1), SquaredMeasure((1, 2)), grid_size=100)


def test_corpus_spans_all_unit_measures():
    kinds = {mu.kind for _, _, mu, _, _ in ORACLE_CORPUS}
    assert kinds == {"lebesgue", "lebesgue2", "destructive"}
    assert len(ORACLE_CORPUS) == 20
