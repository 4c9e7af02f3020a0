"""Exception hierarchy shared by all modules.

Each class maps to one CLI exit code so failures stay classifiable all the
way out of the process: configuration -> 2, numeric -> 3, resource -> 4.
"""


class PairwellError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ConfigurationError(PairwellError):
    """Invalid parameter, config key, or violated setup invariant."""

    exit_code = 2


class DimensionMismatchError(PairwellError):
    """Operands defined on different grids or with incompatible shapes."""

    exit_code = 3


class NumericError(PairwellError):
    """A computation produced values outside its contract."""

    exit_code = 3


class DomainError(NumericError):
    """Argument outside the mathematical domain of an expression."""


class ResourceLimitError(PairwellError):
    """Request exceeds a deliberate size or I/O limit."""

    exit_code = 4
