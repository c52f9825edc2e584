"""
Unsmoothed entropy functionals, all in bits.

Eigenvalues at or below `config.zero_eig` are exact zeros inside every
logarithm (0 log 0 = 0).
"""

import logging
import math
from typing import Iterable, Optional, Union

import numpy as np

from smooth_entropy.config import config
from smooth_entropy.exceptions import DimensionError, ParameterRangeError, StateValidationError
from smooth_entropy.linalg.core import eig_hermitian, partial_trace, support_rank
from smooth_entropy.linalg.operators import DensityOperator, MultipartiteState, as_complex_matrix
from smooth_entropy.types import EntropyMeasure, EntropyValue

logger = logging.getLogger(__name__)

StateLike = Union[DensityOperator, MultipartiteState]


def _density(rho: StateLike) -> DensityOperator:
    return rho.state if isinstance(rho, MultipartiteState) else rho


def _positive(values) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    return values[values > config.zero_eig]


# --- spectral forms, shared with the smoothing module ---

def vn_of_spectrum(values) -> float:
    """-sum lambda log2 lambda."""
    lam = _positive(values)
    return float(-np.sum(lam * np.log2(lam)))


def renyi_of_spectrum(values, alpha: float) -> float:
    """(1 / (1 - alpha)) log2 sum lambda^alpha, evaluated relative to the largest eigenvalue."""
    if alpha <= 0.0:
        raise ParameterRangeError(f"Renyi order must be positive, got {alpha}")
    if alpha == 1.0:
        raise ParameterRangeError("Renyi order 1 is the von Neumann entropy; use von_neumann")
    lam = _positive(values)
    if lam.size == 0:
        raise StateValidationError("Renyi entropy of the zero operator is undefined")
    top = float(np.max(lam))
    if math.isinf(alpha):
        return -math.log2(top)
    log_sum = alpha * math.log2(top) + math.log2(float(np.sum((lam / top) ** alpha)))
    return log_sum / (1.0 - alpha)


# --- operator forms ---

def von_neumann(rho: StateLike) -> EntropyValue:
    """H(rho) = -Tr rho log2 rho."""
    return EntropyValue(measure=EntropyMeasure.VN, value=vn_of_spectrum(_density(rho).eigenvalues))


def _complement(rho: MultipartiteState, cond_on: Iterable[int]) -> list:
    cond_on = sorted(set(int(i) for i in cond_on))
    if any(i < 0 or i >= rho.n_subsystems for i in cond_on):
        raise DimensionError(f"Conditioning subsystems {cond_on} out of range 0..{rho.n_subsystems - 1}")
    if len(cond_on) == rho.n_subsystems:
        raise DimensionError("Conditioning on the full system leaves nothing to condition")
    return cond_on


def conditional_vn(rho: MultipartiteState, cond_on: Iterable[int] = (1,)) -> EntropyValue:
    """H(A|B) = H(AB) - H(B), with B the subsystems in `cond_on`."""
    if not rho.state.is_normalized:
        raise StateValidationError("conditional_vn requires a normalized state; use conditional_vn_subnormalized")
    cond_on = _complement(rho, cond_on)
    h_ab = vn_of_spectrum(rho.state.eigenvalues)
    h_b = vn_of_spectrum(partial_trace(rho, cond_on).state.eigenvalues) if cond_on else 0.0
    return EntropyValue(measure=EntropyMeasure.COND_VN, value=h_ab - h_b)


def conditional_vn_subnormalized(
    rho: MultipartiteState,
    cond_on: Optional[Iterable[int]] = None,
) -> EntropyValue:
    """(1 / Tr rho) max_sigma Tr rho (log 1 (x) sigma_B - log rho) over normalized sigma_B.

    Writing rho = c rho' with rho' normalized, the objective equals
    c (-D(rho'_AB || 1 (x) sigma_B) - log2 c), maximized at sigma_B = rho'_B by
    the relative-entropy identity. Hence the value is H(A|B)_rho' - log2 c.
    """
    c = rho.trace
    if c <= config.zero_eig:
        raise StateValidationError("Subnormalized conditional entropy of a zero-trace operator is undefined")
    cond_on = list(range(1, rho.n_subsystems)) if cond_on is None else cond_on
    normalized = MultipartiteState(state=rho.state.normalized(), dims=rho.dims)
    value = conditional_vn(normalized, cond_on).value - math.log2(c)
    return EntropyValue(measure=EntropyMeasure.COND_VN, value=value)


def relative_entropy(rho: StateLike, sigma) -> float:
    """D(rho || sigma) = Tr rho log2 rho - Tr rho log2 sigma.

    `sigma` may be any PSD matrix (not necessarily normalized). Returns
    +inf when rho has weight outside the support of sigma.
    """
    a = _density(rho)
    s = sigma.matrix if isinstance(sigma, (DensityOperator, MultipartiteState)) else as_complex_matrix(sigma, "sigma")
    if s.shape != a.matrix.shape:
        raise DimensionError(f"relative_entropy shapes differ: {a.matrix.shape} vs {s.shape}")

    vals, vecs = eig_hermitian(s)
    if vals.size and vals[-1] < -a.herm_tol:
        raise StateValidationError(f"sigma is not PSD: min eigenvalue {vals[-1]:.3e}")
    top = max(float(vals[0]), 0.0)
    on_support = vals > max(config.rank_tol * top, config.zero_eig)

    # Diagonal of rho in sigma's eigenbasis
    weights = np.real(np.einsum("ij,ik,kj->j", vecs.conj(), a.matrix, vecs))
    outside = float(np.sum(weights[~on_support]))
    if outside > config.rank_tol * max(a.trace, 1.0) + config.zero_eig:
        logger.warning(f"relative_entropy: support violation, weight {outside:.3e} outside supp(sigma)")
        return math.inf

    cross = float(np.sum(weights[on_support] * np.log2(vals[on_support])))
    lam = _positive(a.eigenvalues)
    return float(np.sum(lam * np.log2(lam))) - cross


def renyi_alpha(rho: StateLike, alpha: float) -> EntropyValue:
    """H_alpha(rho) = (1 / (1 - alpha)) log2 Tr rho^alpha; alpha = inf gives H_min."""
    value = renyi_of_spectrum(_density(rho).eigenvalues, alpha)
    return EntropyValue(measure=EntropyMeasure.RENYI_ALPHA, value=value, alpha=alpha)


def h0(rho: StateLike, rank_tol: Optional[float] = None) -> EntropyValue:
    """H_0(rho) = log2 rank rho."""
    rank = support_rank(rho, rank_tol)
    if rank == 0:
        raise StateValidationError("H_0 of the zero operator is undefined")
    return EntropyValue(measure=EntropyMeasure.H0, value=math.log2(rank))


def hmin(rho: StateLike) -> EntropyValue:
    """H_min(rho) = -log2 ||rho||_inf."""
    top = float(_density(rho).eigenvalues[0])
    if top <= config.zero_eig:
        raise StateValidationError("H_min of the zero operator is undefined")
    return EntropyValue(measure=EntropyMeasure.HMIN, value=-math.log2(top))


def eta(x: float) -> float:
    """eta(x) = -x log2 x on [0, 1], eta(0) = 0."""
    if not 0.0 <= x <= 1.0:
        raise ParameterRangeError(f"eta is defined on [0, 1], got {x}")
    return 0.0 if x == 0.0 else -x * math.log2(x)


def fannes_bound(epsilon: float, dim: int) -> float:
    """epsilon log2 d + eta(epsilon), the continuity bound in trace distance."""
    return epsilon * math.log2(dim) + eta(epsilon)
