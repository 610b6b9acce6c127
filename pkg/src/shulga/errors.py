"""Exception hierarchy shared by every module."""


class ShulgaError(Exception):
    pass


class DigitUnavailable(ShulgaError, IndexError):
    """A digit index beyond a finite expansion was requested."""


class PrecisionExhausted(ShulgaError):
    """A digit stream ran out of refinement budget before a digit was pinned."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class OutOfRange(ShulgaError, ValueError):
    pass


class InvariantViolation(ShulgaError, AssertionError):
    """An internal invariant that a proven lemma guarantees has failed."""
