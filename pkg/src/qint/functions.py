"""Integrands.

:class:`PiecewiseMonotoneFn` is a function on [0, 1] cut into segments, each
with its own evaluator and a monotonicity tag; this is what the layer-cake
engine needs to find level sets.  :class:`SimpleFunction` is a finite-valued
function over a partition of the space.  :class:`Transform` is an increasing
reparametrisation ``g`` used by the change-of-variable path.

Descriptors are JSON objects (or shorthand strings such as ``monomial:2``)
that build the library functions used throughout the examples.
"""
from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, NonMonotoneError, SpecError
from .sets import FiniteSubset, IntervalSet

INCREASING = "increasing"
DECREASING = "decreasing"
CONSTANT = "constant"
TRENDS = (INCREASING, DECREASING, CONSTANT)


def _elementwise(scalar_fn, array_fn):
    """Use the fast ``math`` version on floats and the numpy one on arrays."""

    def fn(x):
        if isinstance(x, np.ndarray):
            return array_fn(x)
        return scalar_fn(x)

    return fn


@dataclass(frozen=True)
class Segment:
    lo: float
    hi: float
    fn: Callable
    trend: str

    @property
    def start_value(self):
        return self.fn(self.lo)

    @property
    def end_value(self):
        return self.fn(self.hi)


class PiecewiseMonotoneFn:
    """A bounded function on [0, 1] with monotone pieces.

    ``breakpoints`` must run from 0 to 1; ``pieces`` holds one
    ``(evaluator, trend)`` pair per gap.  Each evaluator is used on the closed
    interval of its segment, so jumps at breakpoints are allowed.
    """

    def __init__(self, breakpoints: Sequence[float], pieces, name: str = "f", spec=None, coeffs=None):
        bps = list(breakpoints)
        if len(bps) < 2 or bps[0] != 0 or bps[-1] != 1:
            raise DomainError(f"breakpoints must start at 0 and end at 1, got {bps}")
        if any(b <= a for a, b in zip(bps, bps[1:])):
            raise DomainError(f"breakpoints must be strictly increasing, got {bps}")
        pieces = list(pieces)
        if len(pieces) != len(bps) - 1:
            raise DomainError("need exactly one piece per breakpoint gap")
        segs = []
        for (lo, hi), (fn, trend) in zip(zip(bps, bps[1:]), pieces):
            if trend not in TRENDS:
                raise DomainError(f"unknown trend {trend!r}")
            segs.append(Segment(lo, hi, fn, trend))
        self.breakpoints = tuple(bps)
        self.segments = tuple(segs)
        self.name = name
        self.spec = spec
        self.coeffs = coeffs  # ascending polynomial coefficients, when known

    def __repr__(self) -> str:
        return f"PiecewiseMonotoneFn({self.name}, {len(self.segments)} segments)"

    def segment_index(self, x: float) -> int:
        i = bisect.bisect_right(self.breakpoints, x) - 1
        return min(max(i, 0), len(self.segments) - 1)

    def __call__(self, x: float) -> float:
        return self.segments[self.segment_index(x)].fn(x)

    def evaluate_array(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        out = np.empty_like(xs)
        idx = np.clip(np.searchsorted(self.breakpoints, xs, side="right") - 1, 0, len(self.segments) - 1)
        for i, seg in enumerate(self.segments):
            mask = idx == i
            if mask.any():
                out[mask] = np.broadcast_to(seg.fn(xs[mask]), xs[mask].shape)
        return out

    def endpoint_values(self) -> list[float]:
        vals = []
        for seg in self.segments:
            vals.extend((float(seg.start_value), float(seg.end_value)))
        return vals

    @property
    def bounds(self) -> tuple[float, float]:
        vals = self.endpoint_values()
        return min(vals), max(vals)

    def scaled(self, alpha: float) -> "PiecewiseMonotoneFn":
        flip = {INCREASING: DECREASING, DECREASING: INCREASING, CONSTANT: CONSTANT}
        pieces = []
        for seg in self.segments:
            trend = seg.trend if alpha > 0 else (CONSTANT if alpha == 0 else flip[seg.trend])
            pieces.append((_scale(seg.fn, alpha), trend))
        coeffs = None if self.coeffs is None else tuple(alpha * c for c in self.coeffs)
        return PiecewiseMonotoneFn(self.breakpoints, pieces, f"{alpha}*{self.name}", coeffs=coeffs)

    def compose(self, g: "Transform") -> "PiecewiseMonotoneFn":
        """``g ∘ f`` for an increasing transform ``g``; trends are preserved."""
        pieces = [(_compose(g.g, seg.fn), seg.trend) for seg in self.segments]
        return PiecewiseMonotoneFn(self.breakpoints, pieces, f"{g.name}({self.name})")

    def power(self, n: int) -> "PiecewiseMonotoneFn":
        if self.bounds[0] < 0:
            raise DomainError("power of a function that takes negative values")
        return self.compose(power_transform(n))

    def __add__(self, other: "PiecewiseMonotoneFn") -> "PiecewiseMonotoneFn":
        if self.coeffs is not None and other.coeffs is not None:
            n = max(len(self.coeffs), len(other.coeffs))
            a = list(self.coeffs) + [0] * (n - len(self.coeffs))
            b = list(other.coeffs) + [0] * (n - len(other.coeffs))
            return polynomial([x + y for x, y in zip(a, b)], name=f"{self.name}+{other.name}")
        bps = sorted(set(self.breakpoints) | set(other.breakpoints))
        pieces = []
        for lo, hi in zip(bps, bps[1:]):
            mid = 0.5 * (lo + hi)
            s1 = self.segments[self.segment_index(mid)]
            s2 = other.segments[other.segment_index(mid)]
            trends = {s1.trend, s2.trend} - {CONSTANT}
            if len(trends) > 1:
                raise DomainError(
                    f"sum of {self.name} and {other.name} has no known monotone pieces on [{lo}, {hi}]"
                )
            trend = trends.pop() if trends else CONSTANT
            pieces.append((_add(s1.fn, s2.fn), trend))
        return PiecewiseMonotoneFn(bps, pieces, f"{self.name}+{other.name}")

    def check_monotone(self, samples: int = 64) -> None:
        """Spot-check every segment against its tag; raises NonMonotoneError."""
        for i, seg in enumerate(self.segments):
            xs = np.linspace(seg.lo, seg.hi, samples)
            ys = np.array([float(seg.fn(float(x))) for x in xs])
            d = np.diff(ys)
            scale = 1e-12 * max(1.0, float(np.max(np.abs(ys))))
            if seg.trend == INCREASING and np.any(d < -scale):
                raise NonMonotoneError(i, seg.lo, seg.hi, "values decrease")
            if seg.trend == DECREASING and np.any(d > scale):
                raise NonMonotoneError(i, seg.lo, seg.hi, "values increase")
            if seg.trend == CONSTANT and np.any(np.abs(d) > scale):
                raise NonMonotoneError(i, seg.lo, seg.hi, "values change")


def _scale(fn, alpha):
    return lambda x: alpha * fn(x)


def _compose(g, fn):
    return lambda x: g(fn(x))


def _add(f1, f2):
    return lambda x: f1(x) + f2(x)


def _horner(coeffs):
    rev = tuple(reversed(coeffs))

    def fn(x):
        acc = 0 * x + rev[0] if isinstance(x, np.ndarray) else rev[0]
        for c in rev[1:]:
            acc = acc * x + c
        return acc

    return fn


# ----------------------------------------------------------------------------
# Library functions


def polynomial(coeffs: Sequence[float], name: str | None = None) -> PiecewiseMonotoneFn:
    """``c0 + c1 x + c2 x^2 + ...`` cut at the critical points inside (0, 1)."""
    coeffs = list(coeffs) or [0]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    poly = np.polynomial.Polynomial([float(c) for c in coeffs])
    deriv = poly.deriv()
    cuts = []
    if len(coeffs) > 2:
        for r in deriv.roots():
            if abs(r.imag) < 1e-12 and 1e-12 < r.real < 1 - 1e-12:
                cuts.append(float(r.real))
    bps = [0.0] + sorted(set(cuts)) + [1.0]
    fn = _horner(coeffs)
    pieces = []
    for lo, hi in zip(bps, bps[1:]):
        slope = deriv(0.5 * (lo + hi)) if len(coeffs) > 1 else 0.0
        trend = CONSTANT if slope == 0 else (INCREASING if slope > 0 else DECREASING)
        pieces.append((fn, trend))
    label = name or "poly:" + ",".join(_fmt(c) for c in coeffs)
    return PiecewiseMonotoneFn(bps, pieces, label, spec={"kind": "poly", "coeffs": [float(c) for c in coeffs]}, coeffs=tuple(coeffs))


def monomial(n: int) -> PiecewiseMonotoneFn:
    if n < 0:
        raise DomainError("monomial degree must be >= 0")
    f = polynomial([0] * n + [1], name=f"monomial:{n}")
    f.spec = {"kind": "monomial", "n": n}
    return f


def constant(c: float) -> PiecewiseMonotoneFn:
    return PiecewiseMonotoneFn([0, 1], [(lambda x, c=c: c + 0 * x, CONSTANT)], f"const:{_fmt(c)}", spec={"kind": "const", "c": c}, coeffs=(c,))


def tent() -> PiecewiseMonotoneFn:
    return PiecewiseMonotoneFn(
        [0, 0.5, 1],
        [(lambda x: 2 * x, INCREASING), (lambda x: 2 - 2 * x, DECREASING)],
        "tent",
        spec={"kind": "tent"},
    )


_SQRT2 = math.sqrt(2.0)

_LIBRARY = {
    "exp": (_elementwise(math.exp, np.exp), INCREASING),
    "sin": (_elementwise(math.sin, np.sin), INCREASING),
    "cos": (_elementwise(math.cos, np.cos), DECREASING),
    "sinh": (_elementwise(math.sinh, np.sinh), INCREASING),
    "cosh_sqrt2": (_elementwise(lambda x: math.cosh(_SQRT2 * x), lambda x: np.cosh(_SQRT2 * x)), INCREASING),
}


def named(kind: str) -> PiecewiseMonotoneFn:
    fn, trend = _LIBRARY[kind]
    return PiecewiseMonotoneFn([0, 1], [(fn, trend)], kind, spec={"kind": kind})


def _fmt(x) -> str:
    return repr(float(x)) if not float(x).is_integer() else str(int(x))


# ----------------------------------------------------------------------------
# Simple functions


@dataclass(frozen=True)
class SimpleFunction:
    """``sum(alpha_i * indicator(A_i))``.  The supports must partition the
    space; that is checked where the function is integrated."""

    pieces: tuple

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple((v, s) for v, s in self.pieces))
        if not self.pieces:
            raise DomainError("a simple function needs at least one piece")
        kinds = {type(s) for _, s in self.pieces}
        if len(kinds) != 1 or not kinds <= {IntervalSet, FiniteSubset}:
            raise DomainError("supports must all be IntervalSets or all FiniteSubsets")

    @property
    def values(self):
        return [v for v, _ in self.pieces]

    @property
    def on_unit_interval(self) -> bool:
        return isinstance(self.pieces[0][1], IntervalSet)

    def __call__(self, x):
        for v, s in self.pieces:
            if (s.contains(x) if self.on_unit_interval else x in s.members):
                return v
        raise DomainError(f"{x} is not covered by any support")

    def scaled(self, alpha) -> "SimpleFunction":
        return SimpleFunction(tuple((alpha * v, s) for v, s in self.pieces))

    def to_piecewise(self) -> PiecewiseMonotoneFn:
        """The same function as a step function on [0, 1]."""
        if not self.on_unit_interval:
            raise DomainError("only simple functions on [0,1] have a piecewise form")
        steps = sorted((lo, hi, v) for v, s in self.pieces for lo, hi in s)
        bps = [0]
        pieces = []
        for lo, hi, v in steps:
            if lo != bps[-1]:
                raise DomainError(f"supports leave a gap or overlap near {lo}")
            bps.append(hi)
            pieces.append((lambda x, v=float(v): v + 0 * x, CONSTANT))
        if bps[-1] != 1:
            raise DomainError("supports do not cover [0,1]")
        return PiecewiseMonotoneFn([float(b) for b in bps], pieces, "simple")

    def to_json(self) -> dict:
        return {"kind": "simple", "pieces": [[float(v), s.to_json()] for v, s in self.pieces]}


# ----------------------------------------------------------------------------
# Transforms for the change-of-variable path


@dataclass(frozen=True)
class Transform:
    """An increasing differentiable ``g`` with derivative ``dg``."""

    name: str
    g: Callable
    dg: Callable


def identity_transform() -> Transform:
    return Transform("identity", lambda t: t, lambda t: 1.0)


def exp_transform() -> Transform:
    e = _elementwise(math.exp, np.exp)
    return Transform("exp", e, e)


def power_transform(n: int) -> Transform:
    if n < 1:
        raise DomainError("power transform needs n >= 1")
    return Transform(f"pow{n}", lambda t: t ** n, lambda t: n * t ** (n - 1))


def parse_transform(text: str) -> Transform:
    name, _, arg = text.partition(":")
    if name == "identity":
        return identity_transform()
    if name == "exp":
        return exp_transform()
    if name in ("power", "pow") and arg:
        return power_transform(int(arg))
    raise SpecError("transform", f"cannot parse {text!r}")


# ----------------------------------------------------------------------------
# Descriptors


def _parse_set(data):
    if isinstance(data, dict):
        return FiniteSubset(int(data["n"]), frozenset(int(m) for m in data["members"]))
    return IntervalSet.from_json(data)


def function_from_json(data: dict):
    """Build a function from its JSON descriptor."""
    if not isinstance(data, dict) or "kind" not in data:
        raise SpecError("fn", f"expected an object with a 'kind' key, got {data!r}")
    kind = data["kind"]
    try:
        if kind == "monomial":
            return monomial(int(data["n"]))
        if kind == "poly":
            return polynomial([float(c) for c in data["coeffs"]])
        if kind == "const":
            return constant(float(data["c"]))
        if kind == "tent":
            return tent()
        if kind in _LIBRARY:
            return named(kind)
        if kind == "simple":
            return SimpleFunction(tuple((float(v), _parse_set(s)) for v, s in data["pieces"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError("fn", f"bad {kind!r} descriptor: {exc}") from exc
    raise SpecError("fn", f"unknown function kind {kind!r}")


def parse_function(text):
    """Accept a descriptor dict, a JSON string, or shorthand like
    ``monomial:2``, ``poly:0,1,-1``, ``const:3``, ``exp``, ``tent``."""
    if isinstance(text, dict):
        return function_from_json(text)
    text = text.strip()
    if text.startswith("{"):
        try:
            return function_from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise SpecError("fn", f"invalid JSON: {exc}") from exc
    name, _, arg = text.partition(":")
    try:
        if name == "monomial":
            return monomial(int(arg))
        if name == "poly":
            return polynomial([float(Fraction(c)) for c in arg.split(",")])
        if name == "const":
            return constant(float(Fraction(arg)))
    except ValueError as exc:
        raise SpecError("fn", f"cannot parse {text!r}: {exc}") from exc
    if not arg and (name == "tent" or name in _LIBRARY):
        return function_from_json({"kind": name})
    raise SpecError("fn", f"cannot parse {text!r}")


def describe(fn) -> dict:
    """The JSON descriptor of a library function, if it has one."""
    if isinstance(fn, SimpleFunction):
        return fn.to_json()
    if fn.spec is None:
        raise SpecError("fn", f"{fn.name} has no descriptor")
    return dict(fn.spec)
