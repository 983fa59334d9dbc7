"""Exception types shared across the package."""


class FreeOrbitsError(Exception):
    """Base class for all package errors."""


class InvalidInput(FreeOrbitsError, ValueError):
    """Malformed data or a violated precondition."""


class BreakpointBudgetExceeded(FreeOrbitsError):
    """A composite map would carry more breakpoints than the configured cap."""

    def __init__(self, count, cap, partial=None, words=()):
        if words:
            msg = f"{len(words)} words exceeded the breakpoint cap {cap}"
        else:
            msg = f"composite needs {count} breakpoints, cap is {cap}"
        super().__init__(msg)
        self.count = count
        self.cap = cap
        self.partial = partial
        self.words = list(words)


class BudgetExhausted(FreeOrbitsError):
    """An iteration budget ran out before a search terminated."""


class VerificationFailure(FreeOrbitsError):
    """An exact certificate check failed."""

    def __init__(self, message, failed=()):
        super().__init__(message)
        self.failed = tuple(failed)
