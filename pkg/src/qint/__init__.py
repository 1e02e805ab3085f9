"""Quantum integrals against q-measures on [0, 1] and on finite spaces."""
from .coin import CoinModel, expectation_closed, expectation_exact, ratio_table
from .errors import DomainError, NonMonotoneError, QIntError, QuadratureError, SpecError
from .functions import (
    PiecewiseMonotoneFn,
    SimpleFunction,
    Transform,
    constant,
    monomial,
    named,
    parse_function,
    polynomial,
    tent,
)
from .integrator import (
    classical_integral,
    integrate,
    integrate_power,
    integrate_restricted,
    integrate_simple,
    integrate_via_g,
    sub_level_set,
    super_level_set,
)
from .measures import (
    DestructivePairs,
    LebesgueSquared,
    PlainLebesgue,
    QMeasure,
    RestrictedMeasure,
    SquaredCounting,
    SquaredMeasure,
    grade2_residual,
    measure,
    parse_measure,
)
from .quadrature import QuadratureConfig, integrate_1d
from .sets import FiniteSubset, IntervalSet

__version__ = "0.1.0"
