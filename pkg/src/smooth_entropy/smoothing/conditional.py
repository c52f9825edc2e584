"""
Certified bounds on the smooth conditional min-entropy H_min^eps(A|B).

The exact smooth value needs a joint optimization over the epsilon-ball and
sigma_B that is not attempted here. Instead:

- lower bound at 3 eps: H_min^eps(AB) - H_0^eps(B), both from truncation
  constructions that lie inside the ball;
- upper bound: the largest conditional von Neumann entropy among concrete
  candidates in the ball (rho itself and its eigenbasis truncation);
- a grid oracle for dim <= 4 that maximizes the SDP value over
  eigenbasis-diagonal reductions of rho inside the ball.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from smooth_entropy.entropies.functionals import conditional_vn_subnormalized
from smooth_entropy.exceptions import DimensionError, ParameterRangeError, StateValidationError
from smooth_entropy.linalg.core import eig_hermitian, partial_trace
from smooth_entropy.linalg.operators import MultipartiteState
from smooth_entropy.minentropy.conditional import hmin_conditional
from smooth_entropy.smoothing.smooth import hmin_target, smooth_h0, smooth_hmin_unconditional, truncated_state
from smooth_entropy.types import TruncationDirection

logger = logging.getLogger(__name__)

ORACLE_MAX_DIM = 4


class ConditionalBounds(BaseModel):
    """Bound pair for H_min^eps(A|B) plus the pieces it is assembled from."""
    epsilon: float
    lower: float = Field(..., description="Valid lower bound on H_min^{3 eps}(A|B)")
    lower_epsilon: float = Field(..., description="Smoothing parameter the lower bound holds at (3 eps)")
    upper: float = Field(..., description="Largest conditional von Neumann entropy among ball candidates")
    hmin_exact: float = Field(..., description="Unsmoothed H_min(A|B) from the SDP")
    hmin_ab_smooth: float
    h0_b_smooth: float
    upper_candidates: List[float] = Field(default_factory=list)


def _require_bipartite(rho: MultipartiteState) -> None:
    if rho.n_subsystems != 2:
        raise DimensionError(f"Conditional bounds need a bipartite state, got dims {rho.dims}")


def smooth_hmin_conditional_bounds(rho: MultipartiteState, epsilon: float) -> ConditionalBounds:
    """lower(3 eps) = smooth_hmin(AB, eps) - smooth_h0(B, eps) and upper(eps)
    = max of H(A|B) over the candidate states."""
    _require_bipartite(rho)
    if not 0.0 < epsilon < 1.0 / 3.0:
        raise ParameterRangeError(f"epsilon must lie in (0, 1/3) so that 3 eps is a valid radius, got {epsilon}")

    hmin_ab = smooth_hmin_unconditional(rho, epsilon)
    h0_b = smooth_h0(partial_trace(rho, [1]), epsilon, ball_certified=True)

    candidate = truncated_state(rho, hmin_target(epsilon), TruncationDirection.CUT_LARGE)
    candidates = [
        conditional_vn_subnormalized(rho).value,
        conditional_vn_subnormalized(candidate).value,
    ]
    hmin_exact, _ = hmin_conditional(rho)

    bounds = ConditionalBounds(
        epsilon=epsilon,
        lower=hmin_ab - h0_b,
        lower_epsilon=3.0 * epsilon,
        upper=max(candidates),
        hmin_exact=hmin_exact,
        hmin_ab_smooth=hmin_ab,
        h0_b_smooth=h0_b,
        upper_candidates=candidates,
    )
    logger.debug(f"Conditional bounds at eps={epsilon}: [{bounds.lower:.6g}, {bounds.upper:.6g}]")
    return bounds


@dataclass(frozen=True)
class OracleResult:
    value: float
    vn_at_argmax: float
    scales: Tuple[float, ...]
    candidates: int


def conditional_oracle(rho: MultipartiteState, epsilon: float, grid: int = 4) -> OracleResult:
    """Best SDP value over reductions nu_i = lambda_i t_i, t_i in {0, 1/grid, .., 1},
    of rho in its eigenbasis, restricted to the epsilon-ball.

    The generalized fidelity of such a reduction to normalized rho is
    sum_i lambda_i sqrt(t_i). rho itself (all t_i = 1) is always a candidate,
    so the result is at least H_min(A|B)_rho.
    """
    _require_bipartite(rho)
    if rho.state.dim > ORACLE_MAX_DIM:
        raise DimensionError(f"conditional_oracle supports total dimension <= {ORACLE_MAX_DIM}, got {rho.state.dim}")
    if not 0.0 <= epsilon < 1.0:
        raise ParameterRangeError(f"epsilon must lie in [0, 1), got {epsilon}")
    if grid < 1:
        raise ParameterRangeError(f"grid must be positive, got {grid}")
    if not rho.state.is_normalized:
        raise StateValidationError("conditional_oracle needs a normalized state")

    vals, vecs = eig_hermitian(rho.matrix)
    vals = np.clip(vals, 0.0, None)
    threshold = hmin_target(epsilon)
    levels = [k / grid for k in range(grid + 1)]

    best: Optional[Tuple[float, MultipartiteState, Tuple[float, ...]]] = None
    evaluated = 0
    for scales in itertools.product(levels, repeat=len(vals)):
        nu = vals * np.asarray(scales)
        if float(np.sum(nu)) <= 0.0:
            continue
        if float(np.sum(vals * np.sqrt(scales))) < threshold - 1e-12:
            continue
        sigma = MultipartiteState.from_matrix((vecs * nu[np.newaxis, :]) @ vecs.conj().T, dims=rho.dims)
        value, _ = hmin_conditional(sigma)
        evaluated += 1
        if best is None or value > best[0]:
            best = (value, sigma, tuple(scales))

    value, argmax, scales = best
    vn = conditional_vn_subnormalized(argmax).value
    logger.debug(f"conditional_oracle: {evaluated} candidates, best {value:.6g} at scales {scales}")
    return OracleResult(value=value, vn_at_argmax=vn, scales=scales, candidates=evaluated)
