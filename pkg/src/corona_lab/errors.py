"""Exception hierarchy shared by every corona_lab module."""


class CoronaLabError(Exception):
    """Base class for all errors raised by this package."""


class PoleTooClose(CoronaLabError):
    """A denominator vanishes (or nearly so) where the function must be analytic."""


class ZeroOnBoundary(CoronaLabError):
    """An ideal zero was placed on or outside the unit circle."""


class DuplicatePoint(CoronaLabError):
    """Two ideal zeros coincide."""


class NotInSubalgebra(CoronaLabError):
    """A function is not of the form constant + ideal element."""

    def __init__(self, point, residual, message=None):
        self.point = complex(point)
        self.residual = float(residual)
        super().__init__(message or
                         f"not constant on the ideal zero set: residual "
                         f"{self.residual:.3e} at z={self.point:.6g}")


class DimensionMismatch(CoronaLabError):
    pass


class AllZero(CoronaLabError):
    pass


class CommonZeroInDisk(CoronaLabError):
    """The tuple has a common zero inside the pole margin, so no bounded solution exists."""

    def __init__(self, roots, margin):
        self.roots = [complex(r) for r in roots]
        self.margin = float(margin)
        shown = ", ".join(f"{r:.6g}" for r in self.roots)
        super().__init__(f"common zero(s) [{shown}] with modulus < {self.margin}")


class NotInIdealNumerically(CoronaLabError):
    pass


class GramianZero(CoronaLabError):
    pass


class FcZero(CoronaLabError):
    """The constant part of the tuple vanishes."""


class NotASolution(CoronaLabError):
    pass


class HypothesisViolated(CoronaLabError):
    """A pointwise hypothesis fails; ``witness`` holds the offending point and values."""

    def __init__(self, message, witness):
        self.witness = witness
        super().__init__(message)


class SupExceedsOne(CoronaLabError):
    pass


class DomainError(CoronaLabError, ValueError):
    pass


class NonMonotone(CoronaLabError):
    pass


class ParseError(CoronaLabError):
    """Malformed scenario input, with the offending line or field when known."""

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class RejectionBudgetExceeded(CoronaLabError):
    pass
