"""Exception hierarchy shared by all silverline modules."""


class SilverlineError(Exception):
    """Base class for every error raised by the library."""


class InvalidDegreeError(SilverlineError, ValueError):
    pass


class UnsupportedDegreeError(SilverlineError, ValueError):
    pass


class IncompatibleFieldError(SilverlineError, ValueError):
    pass


class ReducibleModulusError(SilverlineError, ValueError):
    pass


class PreconditionError(SilverlineError, ValueError):
    pass


class SingularError(SilverlineError, ValueError):
    pass


class NotFoundError(SilverlineError):
    """A bounded search ran out of budget; ``budget`` records how much was tried."""

    def __init__(self, message, budget=None):
        super().__init__(message)
        self.budget = budget


class CannotCertifyError(SilverlineError):
    pass


class InvalidRuleError(SilverlineError, ValueError):
    def __init__(self, message, row=None, tile=None, expected=None, found=None):
        super().__init__(message)
        self.row = row
        self.tile = tile
        self.expected = expected
        self.found = found


class NoDecompositionError(PreconditionError):
    """Raised when a primitive silver polynomial is asked for a power decomposition."""
