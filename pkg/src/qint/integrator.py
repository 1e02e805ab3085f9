"""The quantum integral.

For a bounded ``f`` and a q-measure ``mu`` the ``a``-centered integral is

    ∫_a^∞ mu{f > λ} dλ  -  ∫_{-∞}^a mu{f < λ} dλ

(``a = 0`` gives the plain integral).  Piecewise-monotone integrands go
through adaptive quadrature over λ, with level sets located by bisection on
each segment.  Simple functions are summed exactly over their finitely many
plateaus.
"""
from __future__ import annotations

from typing import Optional

import numpy as np

from .errors import DomainError, NonMonotoneError
from .functions import (
    CONSTANT,
    INCREASING,
    PiecewiseMonotoneFn,
    Segment,
    SimpleFunction,
    Transform,
)
from .measures import DestructivePairs, QMeasure, RestrictedMeasure, UNIT
from .quadrature import QuadratureConfig, integrate_1d
from .sets import IntervalSet

# λ-range guard band beyond the extreme values of f.
GUARD = 1.0


def _crossing(seg: Segment, index: int, lam: float, root_tol: float) -> float:
    """Bisect for the point where a monotone segment crosses ``lam``."""
    lo, hi = seg.lo, seg.hi
    flo, fhi = seg.fn(lo), seg.fn(hi)
    increasing = seg.trend == INCREASING
    while hi - lo > root_tol:
        mid = 0.5 * (lo + hi)
        fm = seg.fn(mid)
        if not (min(flo, fhi) - 1e-12 * (1 + abs(fm)) <= fm <= max(flo, fhi) + 1e-12 * (1 + abs(fm))):
            raise NonMonotoneError(index, seg.lo, seg.hi, f"f({mid}) = {fm} leaves the bracket [{flo}, {fhi}]")
        if (fm > lam) == increasing:
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def _level_set(f: PiecewiseMonotoneFn, lam: float, above: bool, root_tol: float) -> IntervalSet:
    out = []
    for i, seg in enumerate(f.segments):
        start, end = seg.start_value, seg.end_value
        if seg.trend == CONSTANT:
            if (start > lam) if above else (start < lam):
                out.append((seg.lo, seg.hi))
            continue
        low_end, high_end = (start, end) if seg.trend == INCREASING else (end, start)
        if above:
            if low_end > lam:
                out.append((seg.lo, seg.hi))
                continue
            if high_end <= lam:
                continue
        else:
            if high_end < lam:
                out.append((seg.lo, seg.hi))
                continue
            if low_end >= lam:
                continue
        x = _crossing(seg, i, lam, root_tol)
        # The part above λ sits right of the crossing on an increasing piece.
        if above == (seg.trend == INCREASING):
            out.append((x, seg.hi))
        else:
            out.append((seg.lo, x))
    return IntervalSet(out)


def super_level_set(f: PiecewiseMonotoneFn, lam: float, root_tol: float = 1e-13) -> IntervalSet:
    """``{x : f(x) > lam}``."""
    return _level_set(f, lam, True, root_tol)


def sub_level_set(f: PiecewiseMonotoneFn, lam: float, root_tol: float = 1e-13) -> IntervalSet:
    """``{x : f(x) < lam}``."""
    return _level_set(f, lam, False, root_tol)


# ----------------------------------------------------------------------------
# Simple functions


def _check_partition(f: SimpleFunction, mu: QMeasure) -> None:
    supports = [s for _, s in f.pieces]
    for s in supports:
        mu.check(s)
    for i in range(len(supports)):
        for j in range(i + 1, len(supports)):
            if not supports[i].isdisjoint(supports[j]):
                raise DomainError(f"supports {i} and {j} of the simple function overlap")
    union = supports[0]
    for s in supports[1:]:
        union = union | s
    if isinstance(union, IntervalSet):
        if union.complement():
            raise DomainError(f"supports do not cover [0,1]; missing {union.complement()!r}")
    elif len(union) != union.space_size:
        raise DomainError("supports do not cover the finite space")


def _merge_ties(f: SimpleFunction) -> list:
    groups: dict = {}
    for v, s in f.pieces:
        groups[v] = groups[v] | s if v in groups else s
    return sorted(groups.items(), key=lambda item: item[0])


def integrate_simple(f: SimpleFunction, mu: QMeasure, center=0):
    """Exact centered integral of a simple function.

    With distinct values ``v_1 < ... < v_m <= a < v_{m+1} < ... < v_n`` on
    supports ``A_i``, the λ-integrand is constant between consecutive values,
    giving

        sum_{i>m} (v_i - v_{i-1}) mu(A_i ∪ ... ∪ A_n)     (v_m replaced by a)
      - sum_{i<=m} (v_{i+1} - v_i) mu(A_1 ∪ ... ∪ A_i)    (v_{m+1} replaced by a)

    Arithmetic follows the input types, so Fractions give exact results.
    """
    _check_partition(f, mu)
    groups = _merge_ties(f)
    values = [v for v, _ in groups]
    sets = [s for _, s in groups]
    n = len(groups)
    suffix = [None] * n
    acc = None
    for i in range(n - 1, -1, -1):
        acc = sets[i] if acc is None else acc | sets[i]
        suffix[i] = acc
    prefix = []
    acc = None
    for s in sets:
        acc = s if acc is None else acc | s
        prefix.append(acc)

    m = sum(1 for v in values if v <= center)
    total = 0
    prev = center
    for i in range(m, n):
        total += (values[i] - prev) * mu(suffix[i])
        prev = values[i]
    prev = center
    for i in range(m - 1, -1, -1):
        total -= (prev - values[i]) * mu(prefix[i])
        prev = values[i]
    return total


# ----------------------------------------------------------------------------
# Layer-cake quadrature


def _cfg(cfg: Optional[QuadratureConfig]) -> QuadratureConfig:
    return cfg if cfg is not None else QuadratureConfig.from_env()


def _kinks(f: PiecewiseMonotoneFn, within: Optional[IntervalSet], mu: Optional[QMeasure] = None) -> list[float]:
    """Values of ``f`` where the level-set measure can have a corner: the
    segment endpoints plus the edges of any restriction, including one
    carried by a restricted measure."""
    pts = set(f.endpoint_values())
    edges = [] if within is None else list(within.endpoints())
    while isinstance(mu, RestrictedMeasure):
        if isinstance(mu.support, IntervalSet):
            edges.extend(mu.support.endpoints())
        mu = mu.base
    if isinstance(mu, DestructivePairs):
        # Pair overlaps change shape when a level-set edge sits one offset
        # away from a fixed edge.
        d = float(mu.offset)
        fixed = [0.0, 1.0, *map(float, f.breakpoints), *map(float, edges)]
        edges.extend(x + s for x in fixed for s in (d, -d) if 0 < x + s < 1)
    pts.update(float(f(float(x))) for x in edges)
    return sorted(pts)


def _space_check(mu: QMeasure) -> None:
    if mu.domain != UNIT:
        raise DomainError(f"{mu.kind} is not a measure on [0,1]; use integrate_simple")


def _layer_cake(f, mu, center, cfg, within=None):
    root_tol = cfg.root_tol

    def upper(lam):
        s = super_level_set(f, lam, root_tol)
        return float(mu(s if within is None else s & within))

    def lower(lam):
        s = sub_level_set(f, lam, root_tol)
        return float(mu(s if within is None else s & within))

    fmin, fmax = f.bounds
    lam_lo = min(center, fmin) - GUARD
    lam_hi = max(center, fmax) + GUARD
    kinks = _kinks(f, within, mu)
    tol = 0.5 * cfg.abs_tol
    up = integrate_1d(upper, center, lam_hi, tol, cfg.max_subdivisions, kinks, cfg.max_panels)
    down = integrate_1d(lower, lam_lo, center, tol, cfg.max_subdivisions, kinks, cfg.max_panels)
    return up.value - down.value


def integrate(f, mu: QMeasure, center: float = 0.0, cfg: Optional[QuadratureConfig] = None) -> float:
    """Centered quantum integral of ``f`` over the whole space of ``mu``.

    Simple functions are dispatched to :func:`integrate_simple`.
    """
    if isinstance(f, SimpleFunction):
        return integrate_simple(f, mu, center)
    _space_check(mu)
    return _layer_cake(f, mu, center, _cfg(cfg))


def integrate_restricted(
    f,
    support: IntervalSet,
    mu: QMeasure,
    center: float = 0.0,
    cfg: Optional[QuadratureConfig] = None,
    check: bool = True,
) -> float:
    """``∫_A f dmu``: every level set is intersected with ``A``.

    With ``check`` the value is recomputed through the restricted measure
    ``B -> mu(A ∩ B)`` and the two must agree to within ``2 * abs_tol``.
    """
    cfg = _cfg(cfg)
    _space_check(mu)
    mu.check(support)
    value = _layer_cake(f, mu, center, cfg, within=support)
    if check:
        other = _layer_cake(f, mu.restrict(support), center, cfg)
        if abs(value - other) > 2 * cfg.abs_tol:
            raise ArithmeticError(
                f"restricted integral paths disagree: {value!r} vs {other!r}"
            )
    return value


def integrate_power(
    f: PiecewiseMonotoneFn,
    n: int,
    mu: QMeasure,
    cfg: Optional[QuadratureConfig] = None,
    within: Optional[IntervalSet] = None,
) -> float:
    """``∫ f^n dmu = ∫_0^∞ mu{f > t} n t^(n-1) dt`` for ``f >= 0``."""
    cfg = _cfg(cfg)
    _space_check(mu)
    if n < 1:
        raise DomainError("power must be a positive integer")
    fmin, fmax = f.bounds
    if fmin < 0:
        raise DomainError("integrate_power needs a nonnegative integrand")

    def integrand(t):
        s = super_level_set(f, t, cfg.root_tol)
        if within is not None:
            s = s & within
        return float(mu(s)) * n * t ** (n - 1)

    res = integrate_1d(integrand, 0.0, fmax, cfg.abs_tol, cfg.max_subdivisions, _kinks(f, within, mu), cfg.max_panels)
    return res.value


def _check_increasing(g: Transform, lo: float, hi: float, samples: int = 129) -> None:
    ts = np.linspace(lo, hi, samples)
    gs = np.array([float(g.g(float(t))) for t in ts])
    if hi > lo and np.any(np.diff(gs) <= 0):
        raise DomainError(f"transform {g.name} is not strictly increasing on [{lo}, {hi}]")


def integrate_via_g(
    f: PiecewiseMonotoneFn,
    g: Transform,
    mu: QMeasure,
    center: float = 0.0,
    cfg: Optional[QuadratureConfig] = None,
    within: Optional[IntervalSet] = None,
) -> float:
    """``∫ g∘f dmu_a`` by the change of variable ``λ = g(t)``::

        ∫_{g⁻¹(a)}^{∞} mu{f > t} g'(t) dt  -  ∫_{-∞}^{g⁻¹(a)} mu{f < t} g'(t) dt

    The t-range is cut to the range of ``f``; outside it the level sets are
    the whole space or empty, so those tails are added in closed form.
    """
    cfg = _cfg(cfg)
    _space_check(mu)
    fmin, fmax = f.bounds
    _check_increasing(g, fmin, fmax)
    space = within if within is not None else IntervalSet.unit()
    mass = float(mu(space))
    g_lo, g_hi = float(g.g(fmin)), float(g.g(fmax))

    if center <= g_lo:
        t_a = fmin
    elif center >= g_hi:
        t_a = fmax
    else:
        lo, hi = fmin, fmax
        while hi - lo > cfg.root_tol:
            mid = 0.5 * (lo + hi)
            if g.g(mid) > center:
                hi = mid
            else:
                lo = mid
        t_a = 0.5 * (lo + hi)

    def upper(t):
        s = super_level_set(f, t, cfg.root_tol) & space
        return float(mu(s)) * g.dg(t)

    def lower(t):
        s = sub_level_set(f, t, cfg.root_tol) & space
        return float(mu(s)) * g.dg(t)

    kinks = _kinks(f, within, mu)
    tol = 0.5 * cfg.abs_tol
    up = integrate_1d(upper, t_a, fmax, tol, cfg.max_subdivisions, kinks, cfg.max_panels).value
    down = integrate_1d(lower, fmin, t_a, tol, cfg.max_subdivisions, kinks, cfg.max_panels).value
    up += mass * max(0.0, g_lo - center)
    down += mass * max(0.0, center - g_hi)
    return up - down


def classical_integral(f, lo: float, hi: float, cfg: Optional[QuadratureConfig] = None) -> float:
    """Ordinary ``∫_lo^hi f(x) dx`` with the same quadrature."""
    cfg = _cfg(cfg)
    bps = getattr(f, "breakpoints", ())
    return integrate_1d(f, lo, hi, cfg.abs_tol, cfg.max_subdivisions, bps, cfg.max_panels).value


__all__ = [
    "super_level_set",
    "sub_level_set",
    "integrate_simple",
    "integrate",
    "integrate_restricted",
    "integrate_power",
    "integrate_via_g",
    "classical_integral",
]
