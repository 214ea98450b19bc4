"""Exception hierarchy.

Two roots: :class:`ValidationError` for bad input (CLI exit 2) and
:class:`NumericalError` for computations that cannot be completed (CLI exit 3).
"""


class ValidationError(ValueError):
    pass


class NumericalError(ArithmeticError):
    pass


class InvalidRange(ValidationError):
    pass


class InvalidSize(ValidationError):
    pass


class GridMismatch(ValidationError):
    pass


class LengthMismatch(ValidationError):
    pass


class DomainMismatch(ValidationError):
    pass


class GridCollision(ValidationError):
    pass


class BadCheckpoints(ValidationError):
    pass


class BadParameter(ValidationError):
    pass


class NotSymmetric(ValidationError):
    pass


class NotPSD(ValidationError):
    pass


class NotContraction(ValidationError):
    pass


class InsufficientQuadrature(ValidationError):
    pass


class NoConvergence(NumericalError):
    pass


class OverflowDetected(NumericalError):
    pass


class RangeTooShort(NumericalError):
    pass


class DegenerateSystem(NumericalError):
    pass


class Exhausted(NumericalError):
    """Greedy reordering ran out of members; ``partial`` holds what was built."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
