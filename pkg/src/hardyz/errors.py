"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class RangeError(ValueError):
    """An argument lies outside the supported numerical range."""


class DegenerateRangeError(ValueError):
    """A requested configuration produces an empty or inverted summation range."""


class UnsupportedOrderError(ValueError):
    """A series order beyond what is implemented was requested."""


class PreconditionError(ValueError):
    """A documented precondition does not hold (message names the violated floor)."""


class NumericError(RuntimeError):
    """An iterative or adaptive scheme failed to reach its accuracy target."""


class UnstableMeasurementError(NumericError):
    """A timing measurement was too noisy to report (rerun advised)."""
