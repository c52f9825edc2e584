from .functionals import (
    conditional_vn,
    conditional_vn_subnormalized,
    eta,
    fannes_bound,
    h0,
    hmin,
    relative_entropy,
    renyi_alpha,
    renyi_of_spectrum,
    von_neumann,
    vn_of_spectrum,
)

__all__ = [
    "conditional_vn",
    "conditional_vn_subnormalized",
    "eta",
    "fannes_bound",
    "h0",
    "hmin",
    "relative_entropy",
    "renyi_alpha",
    "renyi_of_spectrum",
    "von_neumann",
    "vn_of_spectrum",
]
