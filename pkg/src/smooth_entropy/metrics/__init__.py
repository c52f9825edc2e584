from .distances import (
    fidelity,
    fidelity_commuting,
    generalized_fidelity,
    purified_distance,
    reorder_to_eigenbasis,
    trace_distance,
    uhlmann_pair,
)

__all__ = [
    "fidelity",
    "fidelity_commuting",
    "generalized_fidelity",
    "purified_distance",
    "reorder_to_eigenbasis",
    "trace_distance",
    "uhlmann_pair",
]
