"""
Smooth Entropy - Core Library

Numerics for finite-dimensional quantum entropies: von Neumann and Renyi
entropies, the conditional min-entropy semidefinite program, smooth min- and
max-type entropies of i.i.d. sources, and a randomized verification harness.
"""

from .exceptions import (
    ConfigError,
    DimensionError,
    ParameterRangeError,
    SmoothEntropyException,
    StateValidationError,
    UnknownCheckError,
)
from .linalg import DensityOperator, MultipartiteState, PureState

__all__ = [
    "ConfigError",
    "DensityOperator",
    "DimensionError",
    "MultipartiteState",
    "ParameterRangeError",
    "PureState",
    "SmoothEntropyException",
    "StateValidationError",
    "UnknownCheckError",
]
