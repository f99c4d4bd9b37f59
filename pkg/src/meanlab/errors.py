"""Exception hierarchy.

Errors split into two families so the CLI can map them onto exit codes:
``PreconditionError`` (bad input, missing coverage; exit 1) and
``NumericError`` (a certification, guard or convergence failure; exit 2).
"""

from __future__ import annotations


class MeanlabError(Exception):
    """Base class for all package errors."""


class PreconditionError(MeanlabError, ValueError):
    """An operation was called outside its stated domain."""


class NumericError(MeanlabError, ArithmeticError):
    """A numerical procedure could not meet its contract."""


class DomainError(PreconditionError):
    pass


class RangeError(PreconditionError):
    """A requested bound exceeds what the arithmetic tables cover."""


class CapacityError(PreconditionError):
    """A request exceeds the configured memory budget."""


class CoverageError(PreconditionError):
    """The zero table does not reach the height an operation needs."""


class SingularPointError(PreconditionError):
    """log zeta requested exactly at a tabulated zero on the critical line."""


class CorruptFileError(PreconditionError):
    pass


class UnsupportedVersionError(CorruptFileError):
    pass


class ChecksumError(CorruptFileError):
    pass


class ResolutionGuardError(NumericError):
    """The sampling grid is too coarse for the highest frequency present."""


class CertificationError(NumericError):
    """Zero counting could not be certified.

    Attributes:
        blocks: list of ``(t_start, t_end, expected, found)`` tuples for the
            Gram blocks that failed.
    """

    def __init__(self, message: str, blocks=None):
        super().__init__(message)
        self.blocks = list(blocks or [])


class QuadratureError(NumericError):
    def __init__(self, message: str, error_estimate: float):
        super().__init__(f"{message} (achieved error estimate {error_estimate:.3e})")
        self.error_estimate = error_estimate
