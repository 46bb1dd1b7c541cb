"""Exception hierarchy shared by all modules."""


class ConflictStreamError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(ConflictStreamError, ValueError):
    """Inputs violate a documented precondition (bad n, T, index, shape...)."""


class ConstructionError(ConflictStreamError):
    """A generator could not build the requested instance."""


class ContractError(ConflictStreamError):
    """A stream or oracle was used outside the model it was built for."""


class IntegrityError(ConflictStreamError):
    """End-of-stream bookkeeping disagrees with a caller-supplied fact."""


class ConfigError(ConflictStreamError):
    """Experiment configuration is malformed or pairs incompatible parts."""


class PromiseViolation(ConflictStreamError):
    """The instance does not satisfy the promise |E_M| >= T."""
