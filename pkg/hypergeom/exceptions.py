"""
Exception hierarchy for hypergeom.

Check failures are never raised; they become report entries. The classes
below signal malformed input or an arithmetic situation that the caller has
to handle (a pole, an uncertifiable truncation).
"""

from typing import Any, Optional, Sequence


class HypergeomError(Exception):
    """Base class for every error raised by this package."""


class ExpressionSyntaxError(HypergeomError, ValueError):
    """Malformed expression text.

    Attributes:
        offset: Byte offset into the UTF-8 encoded input where parsing failed
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownVariableError(ExpressionSyntaxError):
    """A variable name outside the alphabet."""


class ZeroDenominatorError(ExpressionSyntaxError):
    """A rational literal with denominator zero."""


class ZeroFactorError(HypergeomError, ArithmeticError):
    """A linear factor became identically zero."""

    def __init__(self, message: str, exponent: Optional[int] = None):
        super().__init__(message)
        self.exponent = exponent

    @property
    def is_pole(self) -> bool:
        return self.exponent is not None and self.exponent < 0


class NonAffineResultError(HypergeomError):
    """A substitution would leave the space of affine forms."""


class PrecisionError(HypergeomError):
    """A truncated expansion cannot certify the requested coefficient."""


class IDataError(HypergeomError, ValueError):
    """Malformed or invalid I-data file."""


class DegreeBoundError(IDataError):
    """An ingested coefficient violates deg_alpha I_d <= min(-2, -<c1, d>)."""


class MissingFixedPointError(IDataError):
    """An I-data entry does not restrict to every fixed point."""


class GkmConditionError(HypergeomError, ValueError):
    """A class declared polynomial fails the GKM edge condition.

    Attributes:
        violations: Balloons whose tangent weight does not divide c|_p - c|_q
    """

    def __init__(self, message: str, violations: Sequence[Any] = ()):
        super().__init__(message)
        self.violations = list(violations)


class MissingDegreeError(HypergeomError, KeyError):
    """Series data does not cover a required multidegree."""


class NonNormalizableError(HypergeomError):
    """Residual terms cannot be absorbed by the mirror transform.

    Attributes:
        degree: Multidegree being normalized
        level: Power of alpha carrying the offending coefficient
        detail: Rendering of the offending coefficient
    """

    def __init__(self, degree: Any, level: int, detail: str):
        super().__init__(
            f"degree {degree}: residual at alpha^{level} is not normalizable: {detail}"
        )
        self.degree = degree
        self.level = level
        self.detail = detail
