# Exception hierarchy; exit_code is what the shell returns for each failure
from typing import Any


class CSSharpError(Exception):
    exit_code = 1

    def __init__(self, message: str, *, details: dict[str, Any] | None = None):
        super().__init__(message)
        self.details = dict(details or {})


class PreconditionError(CSSharpError):
    exit_code = 2


class ParseError(PreconditionError):
    pass


class LagOutOfRange(PreconditionError):
    pass


class SplitOutOfRange(PreconditionError):
    pass


class EmptySample(PreconditionError):
    pass


class DomainError(PreconditionError):
    pass


class InvalidParameter(PreconditionError):
    pass


class DimensionMismatch(CSSharpError):
    exit_code = 3


class InvalidProjection(CSSharpError):
    exit_code = 4


class UndefinedDivergence(CSSharpError):
    """Raised when the divergence ratio is not positive; `details` keeps the diagnostics."""

    exit_code = 5


class SelfTestFailure(CSSharpError):
    exit_code = 6


class QuadratureFailure(CSSharpError):
    exit_code = 1


def require_same_length(x, y, what: str = "inputs") -> int:
    if len(x) != len(y):
        raise DimensionMismatch(f"{what} differ in length: {len(x)} != {len(y)}")
    return len(x)
