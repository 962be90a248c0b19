"""Shared exception types for the dyadcol package."""

from __future__ import annotations

from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:
    from .criteria import Violation


class DyadcolError(Exception):
    """Base class for all errors raised by this package."""


class PreconditionError(DyadcolError):
    """An operation was called with inputs that fail its stated preconditions.

    When the failure is expressible as a rule violation (e.g. the input
    colouring is not homogeneous), the offending :class:`Violation` rides
    along in ``violation``.
    """

    def __init__(self, message: str, violation: "Optional[Violation]" = None) -> None:
        super().__init__(message)
        self.violation = violation


class BudgetExceededError(DyadcolError):
    """A bounded search refused to start, or stopped, because it would blow its budget."""


class InternalBreachError(DyadcolError):
    """A defensive re-check failed mid-algorithm.

    This signals a bug in the package itself, never bad user input: the
    constructive colourer re-validates its own stage invariants and raises
    this if one does not hold.
    """


class IllegalMoveError(DyadcolError):
    """A game move or colouring submission was rejected; the game state is unchanged."""

    def __init__(self, message: str, violation: "Optional[Violation]" = None) -> None:
        super().__init__(message)
        self.violation = violation
