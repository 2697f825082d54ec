"""Exception hierarchy. The CLI maps each class to an exit code."""


class QuasirandomError(Exception):
    exit_code = 1


class InputError(QuasirandomError, ValueError):
    """Malformed user input: bad group spec, bad subset, bad word."""

    exit_code = 2


class CapExceeded(QuasirandomError):
    """A configured size cap (enumeration, table, dense, work) was hit."""

    exit_code = 3


class TheoremViolation(QuasirandomError):
    """A mathematically guaranteed outcome failed to occur.

    This never signals bad input; it means the implementation is wrong.
    """

    exit_code = 4


class SplittingError(QuasirandomError):
    """Common eigenspace decomposition did not reach one-dimensional pieces."""


class ConvergenceError(QuasirandomError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
