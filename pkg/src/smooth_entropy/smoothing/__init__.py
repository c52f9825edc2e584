"""Smoothing constructions, the grid oracles and the type-class engine."""

from .conditional import ConditionalBounds, OracleResult, conditional_oracle, smooth_hmin_conditional_bounds
from .smooth import (
    brute_force_smooth,
    h0_target,
    hmin_target,
    smooth_h0,
    smooth_h0_truncation,
    smooth_hmin_truncation,
    smooth_hmin_unconditional,
    truncated_state,
)
from .spectrum import Spectrum, TruncationResult, as_spectrum, truncate_spectrum, truncate_values
from .type_classes import (
    TypeClassSpectrum,
    product_type_classes,
    smooth_entropy_iid,
    tensor_power_spectrum,
    truncated_vn_iid,
)

__all__ = [
    "ConditionalBounds",
    "OracleResult",
    "Spectrum",
    "TruncationResult",
    "TypeClassSpectrum",
    "as_spectrum",
    "brute_force_smooth",
    "conditional_oracle",
    "h0_target",
    "hmin_target",
    "product_type_classes",
    "smooth_entropy_iid",
    "smooth_h0",
    "smooth_h0_truncation",
    "smooth_hmin_conditional_bounds",
    "smooth_hmin_truncation",
    "smooth_hmin_unconditional",
    "tensor_power_spectrum",
    "truncate_spectrum",
    "truncate_values",
    "truncated_vn_iid",
    "truncated_state",
]
