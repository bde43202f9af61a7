"""Exception hierarchy shared by the library and the CLI."""


class EigenReduceError(Exception):
    """Base class for all package errors."""


class UsageError(EigenReduceError, ValueError):
    """Invalid arguments or malformed input."""


class ResourceError(EigenReduceError):
    """Instance exceeds the configured vertex cap."""


class NumericalError(EigenReduceError):
    """Eigendecomposition failed or produced unusable output."""
