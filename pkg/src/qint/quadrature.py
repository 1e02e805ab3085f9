"""Globally adaptive 7/15-point Gauss-Kronrod quadrature.

Panels are kept in a heap keyed on their error estimate; the worst panel is
bisected until the summed error drops below ``abs_tol``.  The estimate of each
panel is ``|K15 - G7|``, which is deliberately pessimistic.
"""
from __future__ import annotations

import heapq
import math
import os
from dataclasses import dataclass
from typing import Callable, Iterable

from .errors import QuadratureError

# Kronrod abscissae on [0, 1) half of [-1, 1]; odd indices are the Gauss nodes.
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)

DEFAULT_ABS_TOL = 1e-10


def _default_tol() -> float:
    raw = os.environ.get("QINT_TOL")
    return float(raw) if raw else DEFAULT_ABS_TOL


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = DEFAULT_ABS_TOL
    max_subdivisions: int = 60  # bisection depth of any single panel
    root_tol: float = 1e-13
    max_panels: int = 20000

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if not self.root_tol > 0:
            raise ValueError("root_tol must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")

    @classmethod
    def from_env(cls, **overrides) -> "QuadratureConfig":
        overrides.setdefault("abs_tol", _default_tol())
        return cls(**overrides)


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    evaluations: int


def gauss_kronrod(func: Callable[[float], float], lo: float, hi: float) -> tuple[float, float]:
    """One 15-point Kronrod panel; returns ``(K15, |K15 - G7|)``."""
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    fc = func(center)
    kronrod = fc * _WGK[7]
    gauss = fc * _WG[3]
    for j in range(7):
        dx = half * _XGK[j]
        pair = func(center - dx) + func(center + dx)
        kronrod += _WGK[j] * pair
        if j % 2 == 1:
            gauss += _WG[j // 2] * pair
    kronrod *= half
    gauss *= half
    return kronrod, abs(kronrod - gauss)


def integrate_1d(
    func: Callable[[float], float],
    lo: float,
    hi: float,
    abs_tol: float = DEFAULT_ABS_TOL,
    max_depth: int = 60,
    breakpoints: Iterable[float] = (),
    max_panels: int = 20000,
) -> QuadResult:
    """Integrate ``func`` over ``[lo, hi]``, starting from panels split at
    ``breakpoints`` (those outside the range are ignored)."""
    if hi < lo:
        res = integrate_1d(func, hi, lo, abs_tol, max_depth, breakpoints, max_panels)
        return QuadResult(-res.value, res.error, res.evaluations)
    if hi == lo:
        return QuadResult(0.0, 0.0, 0)

    cuts = sorted({lo, hi, *(p for p in breakpoints if lo < p < hi)})
    heap: list = []
    evaluations = 0
    # Each heap entry: (-error, insertion order, lo, hi, value, error, depth).
    counter = 0
    for a, b in zip(cuts, cuts[1:]):
        if b - a <= 0:
            continue
        value, err = gauss_kronrod(func, a, b)
        evaluations += 15
        heapq.heappush(heap, (-err, counter, a, b, value, err, 0))
        counter += 1

    def totals():
        # Summed in order of the panel position so results do not depend on heap layout.
        panels = sorted(heap, key=lambda e: e[2])
        return math.fsum(e[4] for e in panels), math.fsum(e[5] for e in panels)

    total_value, total_err = totals()
    while total_err > abs_tol:
        if len(heap) >= max_panels:
            raise QuadratureError(total_value, total_err, f"exceeded {max_panels} panels")
        _, _, a, b, value, err, depth = heapq.heappop(heap)
        if depth >= max_depth:
            heapq.heappush(heap, (-err, counter, a, b, value, err, depth))
            raise QuadratureError(
                total_value, total_err, f"panel [{a}, {b}] needs more than {max_depth} subdivisions"
            )
        mid = 0.5 * (a + b)
        total_value -= value
        total_err -= err
        for x0, x1 in ((a, mid), (mid, b)):
            v, e = gauss_kronrod(func, x0, x1)
            evaluations += 15
            counter += 1
            heapq.heappush(heap, (-e, counter, x0, x1, v, e, depth + 1))
            total_value += v
            total_err += e
        # Running sums drift; refresh them exactly every so often.
        if counter % 128 == 0:
            total_value, total_err = totals()
    total_value, total_err = totals()
    return QuadResult(total_value, total_err, evaluations)
