"""Quantum measures (grade-2 additive set functions) on [0, 1] and on finite
sample spaces.

Every measure is an immutable callable: ``mu(A)`` returns a nonnegative number.
Measures on [0, 1] take an :class:`IntervalSet`; measures on a finite space
take a :class:`FiniteSubset` of the matching size.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DomainError, SpecError
from .sets import FiniteSubset, IntervalSet

UNIT = "unit"

MeasurableSet = Union[IntervalSet, FiniteSubset]


class QMeasure:
    """Base class. Subclasses implement ``_evaluate`` and set ``kind``."""

    kind: str = ""

    @property
    def domain(self):
        """``"unit"`` for [0, 1], otherwise the size of the finite space."""
        return UNIT

    def whole(self) -> MeasurableSet:
        if self.domain == UNIT:
            return IntervalSet.unit()
        return FiniteSubset.full(self.domain)

    def empty(self) -> MeasurableSet:
        if self.domain == UNIT:
            return IntervalSet.empty()
        return FiniteSubset(self.domain)

    def check(self, s: MeasurableSet) -> None:
        if self.domain == UNIT:
            if not isinstance(s, IntervalSet):
                raise DomainError(f"{self.kind} lives on [0,1]; got {type(s).__name__}")
        elif not isinstance(s, FiniteSubset) or s.space_size != self.domain:
            raise DomainError(
                f"{self.kind} lives on a space of {self.domain} points; got {s!r}"
            )

    def __call__(self, s: MeasurableSet):
        self.check(s)
        return self._evaluate(s)

    def _evaluate(self, s):
        raise NotImplementedError

    @property
    def total(self):
        return self(self.whole())

    def restrict(self, support: MeasurableSet) -> "RestrictedMeasure":
        return RestrictedMeasure(self, support)

    def to_json(self) -> dict:
        return {"kind": self.kind}


@dataclass(frozen=True)
class PlainLebesgue(QMeasure):
    """Ordinary Lebesgue measure; the additive control case."""

    kind = "lebesgue"

    def _evaluate(self, s: IntervalSet):
        return s.total_length


@dataclass(frozen=True)
class LebesgueSquared(QMeasure):
    kind = "lebesgue2"

    def _evaluate(self, s: IntervalSet):
        return s.total_length ** 2


@dataclass(frozen=True)
class DestructivePairs(QMeasure):
    """Points ``x`` and ``x + offset`` annihilate each other.

    ``mu(A) = len(A) - 2 len({x in A : x + offset in A})``.  Offsets below 1/2
    can make the value negative and are rejected.
    """

    offset: float = Fraction(3, 4)
    kind = "destructive"

    def __post_init__(self):
        if not (Fraction(1, 2) <= self.offset <= 1):
            raise DomainError(f"destructive-pairs offset must lie in [1/2, 1], got {self.offset}")

    def _evaluate(self, s: IntervalSet):
        paired = s & s.translate(-self.offset)
        return s.total_length - 2 * paired.total_length

    def to_json(self) -> dict:
        return {"kind": self.kind, "offset": float(self.offset)}


@dataclass(frozen=True)
class SquaredCounting(QMeasure):
    """The quantum coin: ``mu(A) = |A|^2 / 2^(2n)`` on the ``2^n`` outcomes of
    ``n`` flips.  Values are exact fractions."""

    flips: int = 1
    kind = "coin"

    def __post_init__(self):
        if self.flips < 1:
            raise DomainError("number of flips must be >= 1")

    @property
    def domain(self):
        return 2 ** self.flips

    def _evaluate(self, s: FiniteSubset):
        return Fraction(len(s) ** 2, 4 ** self.flips)

    def to_json(self) -> dict:
        return {"kind": self.kind, "n": self.flips}


@dataclass(frozen=True)
class SquaredMeasure(QMeasure):
    """Square of the finite measure with the given point weights."""

    weights: tuple = (1,)
    kind = "squared"

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))
        if not self.weights or any(w < 0 for w in self.weights):
            raise DomainError("weights must be a nonempty list of nonnegative numbers")

    @property
    def domain(self):
        return len(self.weights)

    def _evaluate(self, s: FiniteSubset):
        return sum((self.weights[i] for i in s.members), 0) ** 2

    def to_json(self) -> dict:
        return {"kind": self.kind, "weights": [float(w) for w in self.weights]}


@dataclass(frozen=True)
class RestrictedMeasure(QMeasure):
    """``mu_A(B) = mu(A ∩ B)``: a q-measure living on the subset ``A``."""

    base: QMeasure
    support: MeasurableSet
    kind = "restricted"

    def __post_init__(self):
        self.base.check(self.support)

    @property
    def domain(self):
        return self.base.domain

    def whole(self):
        return self.support

    def _evaluate(self, s):
        return self.base(self.support & s)

    def to_json(self) -> dict:
        return {"kind": self.kind, "base": self.base.to_json(), "support": self.support.to_json()}


def measure(mu: QMeasure, s: MeasurableSet):
    return mu(s)


def _disjoint(a, b) -> bool:
    return a.isdisjoint(b)


def grade2_residual(mu: QMeasure, a, b, c):
    """``mu(A∪B∪C) + mu(A) + mu(B) + mu(C) - mu(A∪B) - mu(A∪C) - mu(B∪C)``.

    Zero for any q-measure when A, B, C are pairwise disjoint.
    """
    for s in (a, b, c):
        mu.check(s)
    if not (_disjoint(a, b) and _disjoint(a, c) and _disjoint(b, c)):
        raise DomainError("grade-2 residual needs pairwise disjoint sets")
    return (
        mu(a | b | c)
        + mu(a) + mu(b) + mu(c)
        - mu(a | b) - mu(a | c) - mu(b | c)
    )


def measure_from_json(data: dict) -> QMeasure:
    if not isinstance(data, dict) or "kind" not in data:
        raise SpecError("measure", f"expected an object with a 'kind' key, got {data!r}")
    kind = data["kind"]
    try:
        if kind == "lebesgue":
            return PlainLebesgue()
        if kind == "lebesgue2":
            return LebesgueSquared()
        if kind == "destructive":
            return DestructivePairs(Fraction(str(data.get("offset", 0.75))))
        if kind == "coin":
            return SquaredCounting(int(data["n"]))
        if kind == "squared":
            return SquaredMeasure(tuple(data["weights"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError("measure", str(exc)) from exc
    raise SpecError("measure", f"unknown measure kind {kind!r}")


def parse_measure(text: str) -> QMeasure:
    """Parse the command-line shorthand: ``lebesgue2``, ``lebesgue``,
    ``destructive:0.75`` (or ``destructive:3/4``), ``coin:3``, or a JSON object."""
    text = text.strip()
    if text.startswith("{"):
        try:
            return measure_from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise SpecError("measure", f"invalid JSON: {exc}") from exc
    name, _, arg = text.partition(":")
    try:
        if name in ("lebesgue", "lebesgue2") and not arg:
            return measure_from_json({"kind": name})
        if name == "destructive":
            return DestructivePairs(Fraction(arg) if arg else Fraction(3, 4))
        if name == "coin" and arg:
            return SquaredCounting(int(arg))
    except (ValueError, ZeroDivisionError, DomainError) as exc:
        raise SpecError("measure", str(exc)) from exc
    raise SpecError("measure", f"cannot parse {text!r}")
