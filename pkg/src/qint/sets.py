"""Measurable sets: finite unions of half-open subintervals of [0, 1) and
subsets of a finite sample space.

Endpoints are kept in whatever numeric type they were given in, so sets built
from :class:`fractions.Fraction` endpoints stay exact through every operation.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Tuple

from .errors import DomainError

# Intervals shorter than this are dropped during normalization.
MIN_LENGTH = 1e-15

Interval = Tuple[float, float]


def _normalize(intervals: Iterable[Sequence[float]]) -> tuple[Interval, ...]:
    cleaned = []
    for lo, hi in intervals:
        lo = max(lo, 0)
        hi = min(hi, 1)
        if hi - lo > MIN_LENGTH:
            cleaned.append((lo, hi))
    cleaned.sort(key=lambda iv: iv[0])
    merged: list[Interval] = []
    for lo, hi in cleaned:
        if merged and lo <= merged[-1][1]:
            prev_lo, prev_hi = merged[-1]
            merged[-1] = (prev_lo, max(prev_hi, hi))
        else:
            merged.append((lo, hi))
    return tuple(merged)


@dataclass(frozen=True, init=False)
class IntervalSet:
    """A finite disjoint union of half-open intervals ``[lo, hi)`` in [0, 1).

    Construction clips to [0, 1], sorts, and merges overlapping or touching
    pieces, so two sets covering the same points compare equal.
    """

    intervals: tuple[Interval, ...]

    def __init__(self, intervals: Iterable[Sequence[float]] = ()):
        object.__setattr__(self, "intervals", _normalize(intervals))

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls(())

    @classmethod
    def unit(cls) -> "IntervalSet":
        return cls([(0, 1)])

    @classmethod
    def between(cls, lo: float, hi: float) -> "IntervalSet":
        return cls([(lo, hi)])

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def __bool__(self) -> bool:
        return bool(self.intervals)

    def __repr__(self) -> str:
        body = ", ".join(f"[{lo}, {hi})" for lo, hi in self.intervals)
        return f"IntervalSet({body or '∅'})"

    @property
    def total_length(self):
        return sum((hi - lo for lo, hi in self.intervals), 0)

    def contains(self, x: float) -> bool:
        return any(lo <= x < hi for lo, hi in self.intervals)

    def endpoints(self) -> list:
        return [p for iv in self.intervals for p in iv]

    def __or__(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self.intervals + other.intervals)

    def __and__(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        i = j = 0
        a, b = self.intervals, other.intervals
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo < hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return IntervalSet(out)

    def complement(self) -> "IntervalSet":
        out = []
        cursor = 0
        for lo, hi in self.intervals:
            if lo > cursor:
                out.append((cursor, lo))
            cursor = hi
        if cursor < 1:
            out.append((cursor, 1))
        return IntervalSet(out)

    def __sub__(self, other: "IntervalSet") -> "IntervalSet":
        return self & other.complement()

    def translate(self, shift: float) -> "IntervalSet":
        """Shift every interval by ``shift`` and clip the result to [0, 1]."""
        if abs(shift) > 1:
            raise DomainError(f"translation |shift| must be <= 1, got {shift}")
        return IntervalSet((lo + shift, hi + shift) for lo, hi in self.intervals)

    def isdisjoint(self, other: "IntervalSet") -> bool:
        return not (self & other)

    def to_json(self) -> list:
        return [[float(lo), float(hi)] for lo, hi in self.intervals]

    @classmethod
    def from_json(cls, data) -> "IntervalSet":
        try:
            pairs = [(float(lo), float(hi)) for lo, hi in data]
        except (TypeError, ValueError) as exc:
            raise DomainError(f"interval set must be [[lo, hi], ...]: {data!r}") from exc
        for lo, hi in pairs:
            if not 0 <= lo <= hi <= 1:
                raise DomainError(f"interval [{lo}, {hi}) is not inside [0, 1]")
        return cls(pairs)


def interval_union(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return a | b


def interval_intersect(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return a & b


def interval_complement(a: IntervalSet) -> IntervalSet:
    return a.complement()


def interval_translate(a: IntervalSet, shift: float) -> IntervalSet:
    return a.translate(shift)


@dataclass(frozen=True)
class FiniteSubset:
    """A subset of the sample space ``{0, ..., space_size - 1}``."""

    space_size: int
    members: frozenset = frozenset()

    def __post_init__(self):
        if self.space_size < 1:
            raise DomainError("space_size must be positive")
        members = frozenset(self.members)
        bad = [m for m in members if not (isinstance(m, int) and 0 <= m < self.space_size)]
        if bad:
            raise DomainError(f"indices {sorted(bad)} outside 0..{self.space_size - 1}")
        object.__setattr__(self, "members", members)

    @classmethod
    def full(cls, space_size: int) -> "FiniteSubset":
        return cls(space_size, frozenset(range(space_size)))

    def __len__(self) -> int:
        return len(self.members)

    def __bool__(self) -> bool:
        return bool(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    def _check(self, other: "FiniteSubset") -> None:
        if other.space_size != self.space_size:
            raise DomainError(
                f"subsets of different spaces ({self.space_size} vs {other.space_size})"
            )

    def __or__(self, other: "FiniteSubset") -> "FiniteSubset":
        self._check(other)
        return FiniteSubset(self.space_size, self.members | other.members)

    def __and__(self, other: "FiniteSubset") -> "FiniteSubset":
        self._check(other)
        return FiniteSubset(self.space_size, self.members & other.members)

    def complement(self) -> "FiniteSubset":
        return FiniteSubset(self.space_size, frozenset(range(self.space_size)) - self.members)

    def isdisjoint(self, other: "FiniteSubset") -> bool:
        self._check(other)
        return self.members.isdisjoint(other.members)

    def to_json(self) -> dict:
        return {"n": self.space_size, "members": sorted(self.members)}
