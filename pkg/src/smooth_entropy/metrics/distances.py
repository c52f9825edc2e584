"""
Fidelities and distances between (sub)normalized states.

Every function returns a DistanceValue clamped to [0, 1] that also carries
the raw floating-point value.
"""

import logging
from typing import Tuple, Union

import numpy as np
import scipy.linalg

from smooth_entropy.exceptions import DimensionError, StateValidationError
from smooth_entropy.linalg.core import eig_hermitian, matrix_sqrt
from smooth_entropy.linalg.operators import DensityOperator, MultipartiteState, PureState
from smooth_entropy.types import DistanceKind, DistanceValue

logger = logging.getLogger(__name__)

StateLike = Union[DensityOperator, MultipartiteState]


def _density(rho: StateLike) -> DensityOperator:
    return rho.state if isinstance(rho, MultipartiteState) else rho


def _check_pair(rho: StateLike, sigma: StateLike) -> Tuple[DensityOperator, DensityOperator]:
    a, b = _density(rho), _density(sigma)
    if a.dim != b.dim:
        raise DimensionError(f"States act on spaces of different dimension: {a.dim} vs {b.dim}")
    return a, b


def _raw_fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """Trace norm of sqrt(a) sqrt(b) as the sum of its singular values."""
    return float(np.sum(scipy.linalg.svdvals(matrix_sqrt(a) @ matrix_sqrt(b))))


def fidelity(rho: StateLike, sigma: StateLike) -> DistanceValue:
    """F(rho, sigma) = || sqrt(rho) sqrt(sigma) ||_1."""
    a, b = _check_pair(rho, sigma)
    return DistanceValue.clamped(DistanceKind.FIDELITY, _raw_fidelity(a.matrix, b.matrix))


def fidelity_commuting(p, q) -> float:
    """sum_i sqrt(p_i q_i) for simultaneously diagonal states given by their diagonals."""
    p = np.clip(np.asarray(p, dtype=float), 0.0, None)
    q = np.clip(np.asarray(q, dtype=float), 0.0, None)
    if p.shape != q.shape:
        raise DimensionError(f"Spectra of different length: {p.shape} vs {q.shape}")
    return float(np.sum(np.sqrt(p * q)))


def _padded(rho: DensityOperator) -> np.ndarray:
    """rho (+) (1 - Tr rho) as a (d+1) x (d+1) block-diagonal matrix."""
    # Rounding noise in a normalized trace would otherwise leak in as sqrt(1e-16 * x)
    deficit = 0.0 if rho.is_normalized else max(1.0 - rho.trace, 0.0)
    return scipy.linalg.block_diag(rho.matrix, np.array([[deficit]], dtype=np.complex128))


def generalized_fidelity(rho: StateLike, sigma: StateLike) -> DistanceValue:
    """Fidelity of the states padded by a one-dimensional block holding 1 - Tr."""
    a, b = _check_pair(rho, sigma)
    if a.trace > 1.0 + a.herm_tol or b.trace > 1.0 + b.herm_tol:
        raise StateValidationError("generalized_fidelity requires traces at most 1")
    raw = _raw_fidelity(_padded(a), _padded(b))
    return DistanceValue.clamped(DistanceKind.GENERALIZED_FIDELITY, raw)


def purified_distance(rho: StateLike, sigma: StateLike) -> DistanceValue:
    """P = sqrt(1 - Fbar^2), always through the generalized fidelity."""
    f = generalized_fidelity(rho, sigma).value
    raw = float(np.sqrt(max(1.0 - f * f, 0.0)))
    return DistanceValue.clamped(DistanceKind.PURIFIED_DISTANCE, raw)


def trace_distance(rho: StateLike, sigma: StateLike) -> DistanceValue:
    """D = 1/2 || rho - sigma ||_1."""
    a, b = _check_pair(rho, sigma)
    diff = a.matrix - b.matrix
    raw = 0.5 * float(np.sum(np.abs(scipy.linalg.eigvalsh(0.5 * (diff + diff.conj().T)))))
    return DistanceValue.clamped(DistanceKind.TRACE_DISTANCE, raw)


def uhlmann_pair(rho: StateLike, sigma: StateLike) -> Tuple[PureState, PureState]:
    """Purifications (|psi> of sigma, |phi> of rho) on A (x) R attaining the fidelity.

    With vec(X) = sum_ij X_ij |i>|j>, vec(sqrt(rho)) purifies rho and
    vec(sqrt(sigma) U) purifies sigma for any unitary U. Taking U from the polar
    decomposition sqrt(sigma) sqrt(rho) = U H gives <psi|phi> = Tr H = F.
    """
    a, b = _check_pair(rho, sigma)
    if not (a.is_normalized and b.is_normalized):
        raise StateValidationError("uhlmann_pair requires normalized states")
    d = a.dim
    sqrt_rho = matrix_sqrt(a.matrix)
    sqrt_sigma = matrix_sqrt(b.matrix)
    u, _ = scipy.linalg.polar(sqrt_sigma @ sqrt_rho)
    phi = PureState(amplitudes=sqrt_rho.reshape(-1), dims=(d, d))
    psi = PureState(amplitudes=(sqrt_sigma @ u).reshape(-1), dims=(d, d))
    return psi, phi


def reorder_to_eigenbasis(rho: StateLike, sigma: StateLike) -> StateLike:
    """sigma's sorted spectrum placed on rho's sorted eigenvectors.

    The result never sits farther from rho in purified distance than sigma.
    """
    a, b = _check_pair(rho, sigma)
    _, rho_vecs = eig_hermitian(a.matrix)
    sigma_vals = np.clip(b.eigenvalues, 0.0, None)
    m = (rho_vecs * sigma_vals[np.newaxis, :]) @ rho_vecs.conj().T
    aligned = DensityOperator.from_matrix(m, herm_tol=b.herm_tol, validate=False)

    before = purified_distance(a, b).raw
    after = purified_distance(a, aligned).raw
    if after > before + 1e-10:
        logger.warning(f"Eigenbasis reordering increased the purified distance: {before!r} -> {after!r}")

    if isinstance(rho, MultipartiteState):
        return MultipartiteState(state=aligned, dims=rho.dims)
    return aligned
