"""Quantum coin: the quantum expectation of the number of heads in ``n``
flips, under ``mu_n(A) = |A|^2 / 4^n``.  All arithmetic is exact."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .functions import SimpleFunction
from .integrator import integrate_simple
from .measures import SquaredCounting
from .sets import FiniteSubset


@dataclass(frozen=True)
class CoinModel:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a coin model needs n >= 1 flips")

    @property
    def measure(self) -> SquaredCounting:
        return SquaredCounting(self.n)

    def heads(self) -> SimpleFunction:
        """Head count on outcomes ``0 .. 2^n - 1`` (bit set = heads)."""
        size = 2 ** self.n
        by_count: dict[int, set] = {}
        for outcome in range(size):
            by_count.setdefault(bin(outcome).count("1"), set()).add(outcome)
        return SimpleFunction(
            tuple((k, FiniteSubset(size, frozenset(members))) for k, members in sorted(by_count.items()))
        )

    def expectation(self, center=0):
        return integrate_simple(self.heads(), self.measure, center)


def expectation_exact(n: int) -> Fraction:
    """Sum over k < n of (C(n,0) + ... + C(n,k))^2, divided by 4^n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    row = [1]
    for k in range(n):
        row.append(row[-1] * (n - k) // (k + 1))
    total = 0
    partial = 0
    for k in range(n):
        partial += row[k]
        total += partial * partial
    return Fraction(total, 4 ** n)


def expectation_closed(n: int) -> Fraction:
    """``(n / 2) (1 - C(2n, n) / 4^n)``.

    Follows from sum_{k=0}^{n} (C(n,0) + ... + C(n,k))^2 = (n+2) 2^(2n-1) - (n/2) C(2n, n)
    after removing the k = n term, which is (2^n)^2.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return Fraction(n, 2) * (1 - Fraction(comb(2 * n, n), 4 ** n))


def expectation_closed_as_printed(n: int) -> Fraction:
    """``(n + 2 - (n C(2n, n) + 2) / 4^n) / 2``: the published closed form, kept
    only so tests can show it disagrees with the direct sum (it gives 1 at n = 1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return (n + 2 - Fraction(n * comb(2 * n, n) + 2, 4 ** n)) / 2


def format_decimal(x: Fraction, digits: int) -> str:
    """Round half-to-even at ``digits`` places and print without exponent."""
    q = round(Fraction(x), digits)
    sign = "-" if q < 0 else ""
    scaled = abs(q) * 10 ** digits
    whole, frac = divmod(int(scaled), 10 ** digits)
    if digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{digits}d}"


def format_fraction(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def ratio(n: int) -> Fraction:
    return 2 * expectation_closed(n) / n


def ratio_table(n_max: int, digits: int = 10) -> list[tuple[int, Fraction, str]]:
    """Rows ``(n, a_n, 2 a_n / n rounded to digits)`` for ``n = 1..n_max``."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    rows = []
    for n in range(1, n_max + 1):
        a = expectation_exact(n)
        rows.append((n, a, format_decimal(2 * a / n, digits)))
    return rows


def bound_check(n: int) -> bool:
    """The quantum expectation never exceeds the classical ``n/2``."""
    return expectation_exact(n) <= Fraction(n, 2)


def centered_two_flip(a):
    """Centered integral of the two-flip head count, piecewise linear in ``a``."""
    a = Fraction(a) if not isinstance(a, float) else a
    if a <= 0:
        return Fraction(5, 8) - a
    if a <= 2:
        return Fraction(5, 8) - Fraction(5, 8) * a
    return Fraction(11, 8) - a
