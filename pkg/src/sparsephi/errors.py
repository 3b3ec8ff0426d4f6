"""Exception hierarchy shared by every module."""


class TotientError(Exception):
    """Base class for all errors raised by sparsephi."""


class DomainError(TotientError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class NotATotientError(DomainError):
    """The value is not in the image of Euler's function."""

    def __init__(self, m):
        super().__init__(f"{m} is not a totient (empty preimage)")
        self.m = m


class Overflow64Error(TotientError, OverflowError):
    """A result or intermediate value does not fit in 64 bits."""


class ResourceError(TotientError):
    """A sieve or scan would exceed the configured memory or time budget."""


class HorizonTooSmallError(ResourceError):
    def __init__(self, have, required):
        super().__init__(f"sieve horizon {have} is below the required horizon {required}")
        self.have = have
        self.required = required


class CriterionViolatedError(DomainError):
    """Parameters fail a stated criterion; ``inequality`` names the failed condition."""

    def __init__(self, inequality, detail=""):
        msg = f"criterion violated: {inequality}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.inequality = inequality


class HypothesisError(DomainError):
    """Input does not satisfy the hypothesis of the construction being exercised."""


class NoProgressionError(DomainError):
    """No progression of length >= 3 exists in the queried set."""


class CorruptCacheError(TotientError):
    """A sieve cache file failed validation."""


class VerificationError(TotientError):
    """A computed object failed its own consistency check."""
