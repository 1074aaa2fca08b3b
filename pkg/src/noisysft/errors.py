"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class NoisySFTError(Exception):
    exit_code = 1


class InvalidInput(NoisySFTError, ValueError):
    exit_code = 2


class BudgetExceeded(NoisySFTError):
    """An enumeration, window or memory budget would be exceeded."""

    exit_code = 3

    def __init__(self, message, *, layer=None, needed=None, budget=None):
        super().__init__(message)
        self.layer = layer
        self.needed = needed
        self.budget = budget


class Inconsistency(NoisySFTError):
    """Two independent computations disagree; carries a structured diagnostic."""

    exit_code = 4

    def __init__(self, message, diagnostic=None):
        super().__init__(message)
        self.diagnostic = diagnostic or {}


class BoundaryModeError(InvalidInput):
    pass


class AlphabetMismatch(InvalidInput):
    pass
