"""
Dense Hermitian linear algebra on (multipartite) states.
"""

import logging
import math
import string
from typing import Callable, Iterable, Optional, Tuple, Union

import numpy as np
import scipy.linalg

from smooth_entropy.config import config
from smooth_entropy.exceptions import DimensionError, StateValidationError
from smooth_entropy.linalg.operators import (
    DensityOperator,
    MultipartiteState,
    PureState,
    as_complex_matrix,
)
from smooth_entropy.types import TraceClass

logger = logging.getLogger(__name__)

StateLike = Union[DensityOperator, MultipartiteState]


def _density(rho: StateLike) -> DensityOperator:
    return rho.state if isinstance(rho, MultipartiteState) else rho


def _dims(rho: StateLike) -> Tuple[int, ...]:
    return rho.dims if isinstance(rho, MultipartiteState) else (rho.dim,)


def hermitize(m: np.ndarray) -> np.ndarray:
    """(M + M^dag) / 2."""
    return 0.5 * (m + m.conj().T)


def eig_hermitian(m) -> Tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of the Hermitian part of `m`.

    Eigenvalues come back non-increasing. Ties (within 1e-12 of the spectral
    scale) are ordered by the eigenvector magnitudes, lexicographically from
    the first basis component, and each eigenvector is phased so that its
    largest-magnitude component is real and positive.
    """
    m = as_complex_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"eig_hermitian needs a square matrix, got shape {m.shape}")
    if m.size == 0:
        return np.zeros(0), np.zeros((0, 0), dtype=np.complex128)

    vals, vecs = scipy.linalg.eigh(hermitize(m))

    pivots = np.argmax(np.abs(vecs), axis=0)
    phases = vecs[pivots, np.arange(vecs.shape[1])]
    vecs = vecs * (np.abs(phases) / phases)[np.newaxis, :]

    scale = max(float(np.max(np.abs(vals))), 1.0)
    rounded = np.round(-vals / scale, 12)
    mags = np.round(np.abs(vecs), 12)
    keys = [-mags[i, :] for i in reversed(range(mags.shape[0]))] + [rounded]
    order = np.lexsort(keys)
    return vals[order], vecs[:, order]


def matrix_function(m, fn: Callable[[np.ndarray], np.ndarray], clamp: bool = True) -> np.ndarray:
    """V fn(lambda) V^dag, with negative eigenvalues clamped to zero first."""
    vals, vecs = eig_hermitian(m)
    if clamp:
        vals = np.clip(vals, 0.0, None)
    return (vecs * fn(vals)[np.newaxis, :]) @ vecs.conj().T


def matrix_sqrt(m) -> np.ndarray:
    return matrix_function(m, np.sqrt)


def tensor(a: StateLike, b: StateLike) -> MultipartiteState:
    """Kronecker product; subsystem dimensions are concatenated."""
    rho_a, rho_b = _density(a), _density(b)
    dim = rho_a.dim * rho_b.dim
    if dim > config.max_dim:
        raise DimensionError(f"Tensor product dimension {dim} exceeds max_dim={config.max_dim}")
    trace_class = (
        TraceClass.NORMALIZED
        if rho_a.is_normalized and rho_b.is_normalized
        else None
    )
    state = DensityOperator.from_matrix(
        np.kron(rho_a.matrix, rho_b.matrix),
        herm_tol=max(rho_a.herm_tol, rho_b.herm_tol),
        trace_class=trace_class,
        validate=False,
    )
    return MultipartiteState(state=state, dims=_dims(a) + _dims(b))


def tensor_power(rho: StateLike, n: int) -> MultipartiteState:
    if n < 1:
        raise DimensionError(f"Tensor power needs n >= 1, got {n}")
    result = rho if isinstance(rho, MultipartiteState) else MultipartiteState(state=rho, dims=(rho.dim,))
    for _ in range(n - 1):
        result = tensor(result, rho)
    return result


def partial_trace(rho: MultipartiteState, keep: Iterable[int]) -> MultipartiteState:
    """Trace out every subsystem not listed in `keep`.

    Kept subsystems appear in increasing index order.
    """
    keep = sorted(set(int(k) for k in keep))
    n = rho.n_subsystems
    if not keep:
        raise DimensionError("partial_trace needs a nonempty keep set")
    if keep[0] < 0 or keep[-1] >= n:
        raise DimensionError(f"Subsystem index out of range 0..{n - 1}: {keep}")
    if len(keep) == n:
        return rho
    if 2 * n > len(string.ascii_letters):
        raise DimensionError(f"Too many subsystems ({n}) for partial_trace")

    letters = string.ascii_letters
    row = list(letters[:n])
    col = list(letters[n:2 * n])
    for i in range(n):
        if i not in keep:
            col[i] = row[i]
    out = "".join(row[i] for i in keep) + "".join(col[i] for i in keep)
    tensor_view = rho.matrix.reshape(rho.dims + rho.dims)
    reduced = np.einsum(f"{''.join(row)}{''.join(col)}->{out}", tensor_view)

    kept_dims = tuple(rho.dims[i] for i in keep)
    d = math.prod(kept_dims)
    state = DensityOperator.from_matrix(
        reduced.reshape(d, d),
        herm_tol=rho.state.herm_tol,
        trace_class=rho.state.trace_class if rho.state.is_normalized else None,
        validate=False,
    )
    return MultipartiteState(state=state, dims=kept_dims)


def group_subsystems(rho: MultipartiteState, groups: Iterable[Iterable[int]]) -> MultipartiteState:
    """Permute subsystems into the order given by `groups` and merge each group.

    groups=[[0], [1, 2]] turns an A|B|C state into an A|BC state.
    """
    groups = [list(g) for g in groups]
    order = [i for g in groups for i in g]
    if sorted(order) != list(range(rho.n_subsystems)):
        raise DimensionError(f"Groups {groups} must partition subsystems 0..{rho.n_subsystems - 1}")
    n = rho.n_subsystems
    perm = order + [i + n for i in order]
    m = rho.matrix.reshape(rho.dims + rho.dims).transpose(perm).reshape(rho.state.dim, rho.state.dim)
    merged = tuple(math.prod(rho.dims[i] for i in g) for g in groups)
    state = DensityOperator.from_matrix(
        m,
        herm_tol=rho.state.herm_tol,
        trace_class=rho.state.trace_class if rho.state.is_normalized else None,
        validate=False,
    )
    return MultipartiteState(state=state, dims=merged)


def permute_subsystems(rho: MultipartiteState, order: Iterable[int]) -> MultipartiteState:
    """Reorder subsystems; order[j] is the old index placed at position j."""
    return group_subsystems(rho, [[i] for i in order])


def support_rank(rho: StateLike, rank_tol: Optional[float] = None) -> int:
    """Number of eigenvalues above rank_tol times the largest one."""
    tol = config.rank_tol if rank_tol is None else rank_tol
    vals = _density(rho).eigenvalues
    if vals.size == 0 or vals[0] <= 0.0:
        return 0
    return int(np.count_nonzero(vals > tol * vals[0]))


def support_projector(rho: StateLike, rank_tol: Optional[float] = None) -> np.ndarray:
    """Orthogonal projector onto the numerical support of rho."""
    tol = config.rank_tol if rank_tol is None else rank_tol
    vals, vecs = eig_hermitian(_density(rho).matrix)
    if vals.size == 0 or vals[0] <= 0.0:
        logger.warning("support_projector called on the zero operator; returning the zero projector")
        return np.zeros_like(_density(rho).matrix)
    v = vecs[:, vals > tol * vals[0]]
    return v @ v.conj().T


def purify(rho: StateLike, rank_tol: Optional[float] = None) -> PureState:
    """Canonical purification sum_i sqrt(lambda_i) |v_i>_A |i>_R.

    The reference system R has dimension rank(rho) (one for the zero operator).
    """
    tol = config.rank_tol if rank_tol is None else rank_tol
    rho = _density(rho)
    vals, vecs = eig_hermitian(rho.matrix)
    r = int(np.count_nonzero(vals > tol * vals[0])) if vals[0] > 0.0 else 0
    if r == 0:
        return PureState(amplitudes=np.zeros(rho.dim), dims=(rho.dim, 1))
    amps = vecs[:, :r] * np.sqrt(np.clip(vals[:r], 0.0, None))[np.newaxis, :]
    return PureState(amplitudes=amps.reshape(-1), dims=(rho.dim, r))


def apply_unitary(rho: MultipartiteState, u: np.ndarray) -> MultipartiteState:
    """U rho U^dag; `u` acts on the full space."""
    u = as_complex_matrix(u, "unitary")
    if u.shape != rho.matrix.shape:
        raise DimensionError(f"Unitary shape {u.shape} does not match state shape {rho.matrix.shape}")
    if not np.allclose(u.conj().T @ u, np.eye(u.shape[0]), atol=1e-9):
        raise StateValidationError("Matrix is not unitary")
    state = DensityOperator.from_matrix(
        u @ rho.matrix @ u.conj().T,
        herm_tol=rho.state.herm_tol,
        trace_class=rho.state.trace_class if rho.state.is_normalized else None,
        validate=False,
    )
    return MultipartiteState(state=state, dims=rho.dims)


def apply_projection(rho: MultipartiteState, projector: np.ndarray) -> MultipartiteState:
    """Pi rho Pi, a trace non-increasing CP map."""
    m = projector @ rho.matrix @ projector
    state = DensityOperator.from_matrix(m, herm_tol=rho.state.herm_tol, validate=False)
    return MultipartiteState(state=state, dims=rho.dims)


def maximally_mixed(dims: Iterable[int]) -> MultipartiteState:
    dims = tuple(dims)
    d = math.prod(dims)
    return MultipartiteState.from_matrix(np.eye(d) / d, dims=dims)


def maximally_entangled(d: int = 2) -> MultipartiteState:
    """|Phi+><Phi+| on d x d."""
    psi = np.eye(d).reshape(-1) / math.sqrt(d)
    return PureState(amplitudes=psi, dims=(d, d)).density()


def diagonal_state(values: Iterable[float], dims: Optional[Iterable[int]] = None) -> MultipartiteState:
    values = np.asarray(list(values), dtype=float)
    dims = tuple(dims) if dims is not None else (values.size,)
    return MultipartiteState.from_matrix(np.diag(values), dims=dims)
