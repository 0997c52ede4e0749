"""Exception types shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, ResourceLimitError -> 3,
NumericalError -> 4. Everything else is a plain bug.
"""


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition."""


class ConfigError(InvalidArgumentError):
    """A config file is malformed, has unknown keys, or fails validation."""


class ResourceLimitError(RuntimeError):
    """A requested computation exceeds a configured size cap."""


class NumericalError(RuntimeError):
    """A numerical routine produced non-finite or otherwise invalid output."""


class NotDiagonalizableError(NumericalError):
    """Eigenvector conditioning too poor for a modal expansion."""


class InfeasibleToleranceError(InvalidArgumentError):
    """A compressibility floor already exceeds the requested error target."""


class UndefinedSignalError(InvalidArgumentError):
    """A metric is undefined for this input (e.g. SNR of an all-zero signal)."""
