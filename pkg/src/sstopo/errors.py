"""Exception types shared across the package."""


class SstopoError(Exception):
    """Base class for all package errors."""


class ConfigurationError(SstopoError):
    """A parameter is outside its admissible range (epsilon, delta, theta_ov, ...)."""


class ParameterRangeError(SstopoError):
    """A surface parameter or rectangle falls outside the valid domain."""


class EmptyInputError(SstopoError):
    """An operation that needs data was given an empty point set."""


class DegenerateCloudError(SstopoError):
    """A point cloud is too small or too degenerate for the requested statistic."""
