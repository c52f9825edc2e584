"""Dense Hermitian linear algebra, state containers and state generation."""

from .core import (
    apply_projection,
    apply_unitary,
    diagonal_state,
    eig_hermitian,
    group_subsystems,
    hermitize,
    matrix_function,
    matrix_sqrt,
    maximally_entangled,
    maximally_mixed,
    partial_trace,
    permute_subsystems,
    purify,
    support_projector,
    support_rank,
    tensor,
    tensor_power,
)
from .io import StateFile, read_state, state_from_dict, state_to_json, write_state
from .operators import DensityOperator, MultipartiteState, PureState, as_complex_matrix
from .random import derive_seed, make_rng, random_density, random_spectrum, random_unitary

__all__ = [
    "DensityOperator",
    "MultipartiteState",
    "PureState",
    "apply_projection",
    "apply_unitary",
    "as_complex_matrix",
    "derive_seed",
    "diagonal_state",
    "eig_hermitian",
    "group_subsystems",
    "hermitize",
    "make_rng",
    "matrix_function",
    "matrix_sqrt",
    "maximally_entangled",
    "maximally_mixed",
    "partial_trace",
    "permute_subsystems",
    "purify",
    "random_density",
    "random_spectrum",
    "random_unitary",
    "read_state",
    "StateFile",
    "state_from_dict",
    "state_to_json",
    "support_projector",
    "support_rank",
    "tensor",
    "tensor_power",
    "write_state",
]
