"""Exception hierarchy shared by all mqisim modules."""


class MqisimError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgumentError(MqisimError, ValueError):
    """An argument is outside the documented domain of an operation."""


class InvalidStateError(MqisimError):
    """A quantum state fails its physicality requirements (e.g. not PSD)."""


class DegenerateStateError(MqisimError):
    """A covariance matrix is numerically singular."""


class TruncationError(MqisimError):
    """A Fock-space cutoff is too small for the requested operation."""


class ConvergenceError(MqisimError):
    """An iterative numerical routine failed to converge."""
