"""Exception hierarchy.

Every error carries a short machine-readable ``code`` and the exit status the
command-line front-end maps it to.
"""

from __future__ import annotations


class ParetoAggError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"
    exit_status = 1


class ValidationError(ParetoAggError, ValueError):
    """Malformed input: bad shapes, invalid probabilities, missing keys."""

    code = "validation"


class DimensionError(ValidationError):
    """Array sizes disagree along a named axis."""

    code = "dimension"

    def __init__(self, axis: str, expected: int, got: int, what: str = ""):
        self.axis = axis
        self.expected = expected
        self.got = got
        where = f" in {what}" if what else ""
        super().__init__(f"{axis} axis mismatch{where}: expected {expected}, got {got}")


class EmptyNeighborhoodError(ValidationError):
    """Every kernel weight vanished at the query point."""

    code = "empty_neighborhood"


class InfeasibleError(ParetoAggError):
    """A certificate was requested for something that admits none."""

    code = "infeasible"
    exit_status = 2

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class UnidentifiableError(ParetoAggError):
    """The supplied table does not pin down the requested parameters."""

    code = "unidentifiable"
    exit_status = 2


class LPError(ParetoAggError):
    """The linear-programming backend failed numerically."""

    code = "lp"
    exit_status = 2

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message if index is None else f"{message} (index {index})")
        self.index = index
