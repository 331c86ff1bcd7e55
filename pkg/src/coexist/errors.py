"""Exception hierarchy shared by every module."""

from __future__ import annotations


class CoexError(Exception):
    """Base class for all toolkit errors."""


class GroupMismatch(CoexError):
    pass


class OutOfInterval(CoexError):
    """Raised when a group element does not lie in [0, u]."""


class Undefined(CoexError):
    """A partial operation (oplus / ominus) is not defined for its arguments."""


class NotComparable(CoexError):
    """Subset arguments are not nested as required (X must be a subset of A)."""


class UnsupportedCarrier(CoexError):
    pass


class NotLattice(CoexError):
    pass


class NotMV(CoexError):
    pass


class NotCommuting(CoexError):
    def __init__(self, i: int, j: int, residual: float):
        super().__init__(f"elements {i} and {j} do not commute (max residual {residual:.3e})")
        self.pair = (i, j)
        self.residual = residual


class NotProjections(CoexError):
    pass


class UnverifiedWitness(CoexError):
    pass


class InvalidSection(CoexError):
    pass


class SizeExceeded(CoexError):
    """A configured resource cap (ground-set size, parts, time) was hit."""


class TimeBudgetExceeded(SizeExceeded):
    pass


class DocumentError(CoexError):
    """Malformed or schema-invalid input document."""
