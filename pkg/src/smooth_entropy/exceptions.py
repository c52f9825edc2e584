"""
Custom exceptions for the smooth_entropy package.
"""


class SmoothEntropyException(Exception):
    """Base exception for the package."""
    def __init__(self, message: str):
        self.message = message
        super().__init__(self.message)


class DimensionError(SmoothEntropyException):
    """Raised on shape, subsystem or split mismatches and on configured size caps."""
    pass


class StateValidationError(SmoothEntropyException):
    """Raised when a matrix is not a valid (sub)normalized density operator."""
    pass


class ParameterRangeError(SmoothEntropyException):
    """Raised when epsilon, alpha, rank, a fidelity target or a copy count is out of range."""
    pass


class UnknownCheckError(SmoothEntropyException):
    """Raised when a verification check id is not registered."""
    pass


class ConfigError(SmoothEntropyException):
    """Raised on malformed suite configs or state files."""
    pass
