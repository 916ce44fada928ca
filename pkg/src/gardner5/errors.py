"""Exception types raised across the package."""


class InvalidArgumentError(ValueError):
    """A caller-supplied argument violates a documented precondition."""


class DomainTooSmallError(ValueError):
    """The periodic box truncates a decaying exact solution too early."""


class RegimeError(InvalidArgumentError):
    """Breather parameters lie outside the stability regime 0 < mu < sqrt(a^2+b^2)/2."""


class InternalConsistencyError(RuntimeError):
    """Two independent evaluations of the same closed form disagree."""


class BlowUpError(RuntimeError):
    """Time stepping produced non-finite values.

    ``last_t`` and ``last_state`` hold the last finite time and field.
    """

    def __init__(self, message, last_t=None, last_state=None):
        super().__init__(message)
        self.last_t = last_t
        self.last_state = last_state
