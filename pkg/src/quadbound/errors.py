"""Exception types shared across the package."""


class QuadboundError(Exception):
    """Base class for all package errors."""


class DomainError(QuadboundError, ArithmeticError):
    """An expression was evaluated outside its real domain."""


class ParseError(QuadboundError, ValueError):
    """Malformed expression text; ``position`` is a 0-based offset."""

    def __init__(self, position, message):
        self.position = position
        self.message = message
        super().__init__(f"{message} at position {position}")


class MeanSlopeOutOfRange(QuadboundError, ValueError):
    """Endpoint data are inconsistent with the supplied derivative bounds."""


class PointOutOfRange(QuadboundError, ValueError):
    """Evaluation point outside the admissible set of a rule."""


class HypothesisViolation(QuadboundError, ValueError):
    """Derivative bounds do not satisfy a normalized case's hypothesis."""


class NoConvergence(QuadboundError, RuntimeError):
    """Adaptive integration exhausted its recursion depth."""


class NotNonincreasing(QuadboundError, ValueError):
    def __init__(self, point, message="weight is not nonincreasing"):
        self.point = point
        super().__init__(f"{message} near t={point!r}")


class RangeViolation(QuadboundError, ValueError):
    def __init__(self, point, value, upper):
        self.point = point
        self.value = value
        super().__init__(f"h({point!r}) = {value!r} lies outside [0, {upper!r}]")


class LambdaOutOfRange(QuadboundError, ValueError):
    pass


class BadFamilyParameters(QuadboundError, ValueError):
    pass


class BudgetExhausted(RuntimeWarning):
    """Certified integration stopped at its subinterval budget."""
