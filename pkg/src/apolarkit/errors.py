"""Shared exception types.

The CLI maps these onto exit codes, so the rest of the package should
raise them instead of bare ValueError where the distinction matters:
ParseError -> 2, PreconditionError -> 3, ReferenceMismatch -> 4.
"""


class ParseError(ValueError):
    """Malformed polynomial or scalar text. Carries the input position."""

    def __init__(self, message, position=None):
        if position is not None:
            message = "%s (at position %d)" % (message, position)
        super().__init__(message)
        self.position = position


class PreconditionError(ValueError):
    """An operation's documented precondition does not hold for the input."""


class UnstableComputationError(PreconditionError):
    """A randomized certificate failed to stabilize within its round budget.

    Raised instead of guessing.  Rerunning with another seed or a larger
    budget is the caller's decision.
    """


class ReferenceMismatch(AssertionError):
    """A reproduction run disagrees with a stored reference value."""
