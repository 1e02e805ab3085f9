"""Exception types raised across the package."""


class QIntError(Exception):
    """Base class for all errors raised by qint."""


class DomainError(QIntError, ValueError):
    """A set, measure or function was used outside the space it lives on."""


class NonMonotoneError(QIntError, ValueError):
    """A segment tagged monotone turned out not to be."""

    def __init__(self, segment: int, lo: float, hi: float, detail: str = ""):
        self.segment = segment
        self.lo = lo
        self.hi = hi
        msg = f"segment {segment} on [{lo}, {hi}] is not monotone as tagged"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class QuadratureError(QIntError, ArithmeticError):
    """Adaptive quadrature could not reach the requested tolerance."""

    def __init__(self, estimate: float, error: float, message: str):
        self.estimate = estimate
        self.error = error
        super().__init__(f"{message} (best estimate {estimate!r}, error bound {error:.3e})")


class SpecError(QIntError, ValueError):
    """A job or descriptor could not be parsed; ``field`` names the culprit."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")
