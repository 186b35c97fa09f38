"""Exception types shared across the package.

Each class maps to one CLI exit code (see :mod:`qhoeffding.cli`).
"""


class QHoeffdingError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ValidationError(QHoeffdingError, ValueError):
    """Input violates a structural invariant (hermiticity, trace, shape...)."""

    exit_code = 2


class DomainError(QHoeffdingError, ValueError):
    """Argument lies outside the domain where a quantity is defined."""

    exit_code = 2


class ResourceError(QHoeffdingError, RuntimeError):
    """A configured size cap would be exceeded."""

    exit_code = 3


class ConsistencyError(QHoeffdingError, ArithmeticError):
    """Two independent numerical routes disagree beyond tolerance."""

    exit_code = 4
