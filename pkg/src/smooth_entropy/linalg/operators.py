"""
Immutable state containers.

Matrices are plain complex numpy arrays flagged read-only once wrapped.
Every constructor validates its invariants; the `validate=False` escape
hatch exists for internal call sites that build states from already
validated factors (tensor products, partial traces).
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from smooth_entropy.config import config
from smooth_entropy.exceptions import DimensionError, StateValidationError
from smooth_entropy.types import TraceClass

logger = logging.getLogger(__name__)


def as_complex_matrix(data, name: str = "matrix") -> np.ndarray:
    """Coerce `data` to a finite 2-D complex array (a copy)."""
    m = np.array(data, dtype=np.complex128)
    if m.ndim != 2:
        raise StateValidationError(f"{name} must be 2-D, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise StateValidationError(f"{name} contains NaN or Inf entries")
    return m


def _freeze(m: np.ndarray) -> np.ndarray:
    m.setflags(write=False)
    return m


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian PSD matrix with trace at most one."""
    matrix: np.ndarray
    trace_class: TraceClass
    herm_tol: float

    @classmethod
    def from_matrix(
        cls,
        data,
        herm_tol: Optional[float] = None,
        trace_class: Optional[TraceClass] = None,
        validate: bool = True,
    ) -> "DensityOperator":
        tol = config.herm_tol if herm_tol is None else herm_tol
        m = as_complex_matrix(data)
        if m.shape[0] != m.shape[1]:
            raise StateValidationError(f"Density operator must be square, got shape {m.shape}")
        if m.shape[0] > config.max_dim:
            raise DimensionError(f"Matrix dimension {m.shape[0]} exceeds max_dim={config.max_dim}")

        if validate:
            asym = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
            if asym > tol:
                raise StateValidationError(f"Matrix is not Hermitian: max |M - M^dag| = {asym:.3e} > {tol:.1e}")
        m = 0.5 * (m + m.conj().T)
        trace = float(np.real(np.trace(m)))

        if validate:
            min_eig = float(scipy.linalg.eigvalsh(m)[0]) if m.size else 0.0
            if min_eig < -tol:
                raise StateValidationError(f"Matrix is not PSD: min eigenvalue {min_eig:.3e} < -{tol:.1e}")

        inferred = TraceClass.NORMALIZED if abs(trace - 1.0) <= tol else TraceClass.SUBNORMALIZED
        if trace_class is None:
            trace_class = inferred
        if trace_class == TraceClass.NORMALIZED and inferred != TraceClass.NORMALIZED:
            raise StateValidationError(f"Normalized state has trace {trace!r}")
        if trace > 1.0 + tol:
            raise StateValidationError(f"Trace {trace!r} exceeds 1")

        return cls(matrix=_freeze(m), trace_class=TraceClass(trace_class), herm_tol=tol)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))

    @property
    def is_normalized(self) -> bool:
        return self.trace_class == TraceClass.NORMALIZED

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues in non-increasing order."""
        vals = scipy.linalg.eigvalsh(self.matrix)[::-1].copy()
        return _freeze(vals)

    def scaled(self, factor: float) -> "DensityOperator":
        if factor <= 0.0 or factor * self.trace > 1.0 + self.herm_tol:
            raise StateValidationError(f"Scale factor {factor} leaves the set of subnormalized states")
        return DensityOperator.from_matrix(self.matrix * factor, herm_tol=self.herm_tol, validate=False)

    def normalized(self) -> "DensityOperator":
        if self.trace <= 0.0:
            raise StateValidationError("Cannot normalize the zero operator")
        return DensityOperator.from_matrix(self.matrix / self.trace, herm_tol=self.herm_tol, validate=False)


@dataclass(frozen=True)
class MultipartiteState:
    """A density operator with an ordered subsystem decomposition."""
    state: DensityOperator
    dims: Tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise DimensionError(f"Subsystem dimensions must be >= 1, got {self.dims}")
        if math.prod(dims) != self.state.dim:
            raise DimensionError(f"Product of dims {dims} does not match matrix dimension {self.state.dim}")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def from_matrix(cls, data, dims: Sequence[int], **kwargs) -> "MultipartiteState":
        return cls(state=DensityOperator.from_matrix(data, **kwargs), dims=tuple(dims))

    @property
    def matrix(self) -> np.ndarray:
        return self.state.matrix

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)

    @property
    def trace(self) -> float:
        return self.state.trace

    def scaled(self, factor: float) -> "MultipartiteState":
        return MultipartiteState(state=self.state.scaled(factor), dims=self.dims)


@dataclass(frozen=True)
class PureState:
    """A (possibly subnormalized) vector with a subsystem decomposition."""
    amplitudes: np.ndarray
    dims: Tuple[int, ...]

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        dims = tuple(int(d) for d in self.dims)
        if math.prod(dims) != amps.size:
            raise DimensionError(f"Product of dims {dims} does not match vector length {amps.size}")
        norm = float(np.linalg.norm(amps))
        if norm > 1.0 + config.herm_tol:
            raise StateValidationError(f"Pure state norm {norm!r} exceeds 1")
        object.__setattr__(self, "amplitudes", _freeze(amps.copy()))
        object.__setattr__(self, "dims", dims)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def density(self) -> MultipartiteState:
        """The projector |psi><psi| as a multipartite state."""
        m = np.outer(self.amplitudes, self.amplitudes.conj())
        return MultipartiteState(state=DensityOperator.from_matrix(m, validate=False), dims=self.dims)

    def overlap(self, other: "PureState") -> complex:
        """<self|other>."""
        if self.amplitudes.size != other.amplitudes.size:
            raise DimensionError("Overlap of vectors with different lengths")
        return complex(np.vdot(self.amplitudes, other.amplitudes))
