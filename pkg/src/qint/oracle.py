"""Brute-force reference values for the quantum integral.

Nothing here shares code with the adaptive engine.  For functions on [0, 1]
the interval is cut into ``x_cells`` equal cells sampled at their midpoints;
the measure of every super- and sub-level set of the sampled function is
tabulated once by counting cells (and, for destructive pairs, cell pairs),
then the λ-integral is a midpoint sum on a uniform grid of ``grid_size``
points per unit.  Simple functions are summed exactly over their plateaus.
"""
from __future__ import annotations

import numpy as np

from .errors import DomainError
from .functions import SimpleFunction
from .measures import DestructivePairs, LebesgueSquared, PlainLebesgue, RestrictedMeasure


def plateau_sum(f: SimpleFunction, mu, center=0):
    """Exact layer-cake integral of a simple function.

    Between consecutive breakpoints (the values of ``f`` and the center) the
    level sets do not change, so each plateau contributes width × measure.
    """
    cuts = sorted({v for v, _ in f.pieces} | {center})
    total = 0
    for p, q in zip(cuts, cuts[1:]):
        if p >= center:
            level = [s for v, s in f.pieces if v > p]
            sign = 1
        else:
            level = [s for v, s in f.pieces if v < q]
            sign = -1
        if level:
            union = level[0]
            for s in level[1:]:
                union = union | s
        else:
            union = mu.empty()
        total += sign * (q - p) * mu(union)
    return total


def _pair_counts(order_rank: np.ndarray, active: np.ndarray, shift: int) -> np.ndarray:
    """``out[k]`` = number of pairs ``(i, i+shift)`` whose cells are both among
    the first ``k`` cells in the given order."""
    m = order_rank.size
    both = active[: m - shift] & active[shift:]
    done = np.maximum(order_rank[: m - shift], order_rank[shift:])[both] + 1
    counts = np.bincount(done, minlength=m + 1)
    return np.cumsum(counts)


def _tabulate(mu, k: np.ndarray, rank: np.ndarray, active: np.ndarray, cells: int) -> np.ndarray:
    """Measure of the union of the first ``k`` cells in ``rank`` order."""
    length = k / cells
    if isinstance(mu, PlainLebesgue):
        return length
    if isinstance(mu, LebesgueSquared):
        return length ** 2
    if isinstance(mu, DestructivePairs):
        shift = int(round(float(mu.offset) * cells))
        if shift >= cells:
            return length
        pairs = _pair_counts(rank, active, shift)
        return length - 2 * pairs[k] / cells
    raise DomainError(f"oracle does not support measure {mu.kind!r}")


def riemann_sum_oracle(f, mu, center: float = 0.0, grid_size: int = 10**6, within=None, x_cells: int | None = None):
    """Independent estimate of the centered quantum integral.

    ``within`` restricts to a subset of [0, 1].  Error is O(1/grid_size) from
    the λ-grid plus O(1/x_cells) from sampling the level sets; ``x_cells``
    defaults to ``max(grid_size, 10^4)``.
    """
    if isinstance(f, SimpleFunction):
        return plateau_sum(f, mu, center)
    if grid_size < 10:
        raise ValueError("grid_size must be >= 10")
    # The x-grid never drops below 10^4 cells so common offsets land on cell edges.
    cells = x_cells or max(grid_size, 10_000)
    base = mu
    xs = (np.arange(cells) + 0.5) / cells
    active = np.ones(cells, dtype=bool)
    supports = [within] if within is not None else []
    while isinstance(base, RestrictedMeasure):
        supports.append(base.support)
        base = base.base
    for support in supports:
        inside = np.zeros(cells, dtype=bool)
        for lo, hi in support:
            inside |= (xs >= float(lo)) & (xs < float(hi))
        active &= inside

    vals = f.evaluate_array(xs)
    live = vals[active]
    n_live = live.size
    if n_live == 0:
        return 0.0
    asc = np.sort(live)

    # Rank of every active cell when sorted descending (super-level) / ascending (sub-level).
    idx = np.flatnonzero(active)
    order = np.argsort(-vals[idx], kind="stable")
    rank_desc = np.full(cells, cells, dtype=np.int64)
    rank_desc[idx[order]] = np.arange(n_live)
    order = np.argsort(vals[idx], kind="stable")
    rank_asc = np.full(cells, cells, dtype=np.int64)
    rank_asc[idx[order]] = np.arange(n_live)

    ks = np.arange(n_live + 1)
    up_table = _tabulate(base, ks, rank_desc, active, cells)
    down_table = _tabulate(base, ks, rank_asc, active, cells)

    lo = np.floor(min(center, asc[0]) * grid_size)
    hi = np.ceil(max(center, asc[-1]) * grid_size)
    lam = (np.arange(lo, hi) + 0.5) / grid_size
    above = lam >= center
    k_up = n_live - np.searchsorted(asc, lam[above], side="right")
    k_down = np.searchsorted(asc, lam[~above], side="left")
    total = up_table[k_up].sum() - down_table[k_down].sum()
    return float(total / grid_size)
