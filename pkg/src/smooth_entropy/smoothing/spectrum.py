"""
Eigenvalue multisets and the truncation construction behind every smoothing
bound in this package.

Truncation removes weight from one end of a sorted spectrum, whole
eigenvalues first and then a fractional cut of a single boundary eigenvalue,
until the retained weight equals the target. For a truncation sigma of a
normalized rho in rho's own eigenbasis, the retained weight is a lower bound
on the generalized fidelity Fbar(rho, sigma), with equality when no
fractional cut is needed.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple, Union

import numpy as np

from smooth_entropy.config import config
from smooth_entropy.exceptions import ParameterRangeError, StateValidationError
from smooth_entropy.linalg.operators import DensityOperator, MultipartiteState
from smooth_entropy.types import TruncationDirection

logger = logging.getLogger(__name__)

# Relative tolerance for "this eigenvalue fits in the remaining budget"
CUT_RTOL = 1e-12
MERGE_RTOL = 1e-12


@dataclass(frozen=True)
class Spectrum:
    """Sorted (value, multiplicity) pairs, values strictly decreasing."""
    entries: Tuple[Tuple[float, int], ...]

    def __post_init__(self):
        entries = tuple((float(v), int(m)) for v, m in self.entries)
        if not entries:
            raise StateValidationError("A spectrum needs at least one entry")
        for v, m in entries:
            if v < 0.0 or not math.isfinite(v):
                raise StateValidationError(f"Spectrum values must be finite and >= 0, got {v!r}")
            if m < 1:
                raise StateValidationError(f"Multiplicities must be positive, got {m}")
        if any(entries[i][0] <= entries[i + 1][0] for i in range(len(entries) - 1)):
            raise StateValidationError("Spectrum entries must be strictly decreasing; use Spectrum.from_values")
        total = math.fsum(v * m for v, m in entries)
        if total > 1.0 + 1e-12:
            raise StateValidationError(f"Spectrum weight {total!r} exceeds 1")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_entries(cls, pairs: Iterable[Tuple[float, int]]) -> "Spectrum":
        """Canonicalize: clamp noise to zero, sort, merge equal values."""
        cleaned = []
        for v, m in pairs:
            v = float(v)
            if m <= 0:
                continue
            if v < -config.herm_tol:
                raise StateValidationError(f"Negative eigenvalue {v!r} beyond tolerance")
            cleaned.append((0.0 if v <= config.zero_eig else v, int(m)))
        cleaned.sort(key=lambda e: -e[0])

        merged = []
        for v, m in cleaned:
            if merged:
                pv, pm = merged[-1]
                if pv == v or abs(pv - v) <= MERGE_RTOL * max(pv, v):
                    merged[-1] = ((pv * pm + v * m) / (pm + m), pm + m)
                    continue
            merged.append((v, m))
        return cls(entries=tuple(merged))

    @classmethod
    def from_values(cls, values: Iterable[float]) -> "Spectrum":
        return cls.from_entries((v, 1) for v in values)

    @classmethod
    def from_state(cls, rho: Union[DensityOperator, MultipartiteState]) -> "Spectrum":
        state = rho.state if isinstance(rho, MultipartiteState) else rho
        return cls.from_values(state.eigenvalues)

    @property
    def total_weight(self) -> float:
        return math.fsum(v * m for v, m in self.entries)

    @property
    def dim(self) -> int:
        return sum(m for _, m in self.entries)

    @property
    def rank(self) -> int:
        return sum(m for v, m in self.entries if v > 0.0)

    @property
    def max_value(self) -> float:
        return self.entries[0][0]

    @property
    def distinct(self) -> int:
        return len(self.entries)

    def values(self) -> np.ndarray:
        """All eigenvalues, non-increasing, multiplicities expanded."""
        return np.repeat([v for v, _ in self.entries], [m for _, m in self.entries]).astype(float)

    def is_normalized(self, tol: float = 1e-9) -> bool:
        return abs(self.total_weight - 1.0) <= tol


@dataclass(frozen=True)
class TruncationResult:
    smoothed: Spectrum
    lambda_star: float
    fractional_cut: float
    achieved_fidelity: float
    direction: TruncationDirection
    target_fidelity: float


SpectrumLike = Union[Spectrum, DensityOperator, MultipartiteState, Sequence[float], np.ndarray]


def as_spectrum(obj: SpectrumLike) -> Spectrum:
    if isinstance(obj, Spectrum):
        return obj
    if isinstance(obj, (DensityOperator, MultipartiteState)):
        return Spectrum.from_state(obj)
    return Spectrum.from_values(np.asarray(obj, dtype=float).reshape(-1))


def truncate_values(values: np.ndarray, target: float, direction: TruncationDirection):
    """Per-eigenvalue truncation of a non-increasing array.

    Returns (nu, lambda_star, fractional_cut) with nu aligned to `values`.
    Ties are cut in array order.
    """
    values = np.asarray(values, dtype=float)
    nu = values.copy()
    total = math.fsum(values)
    budget = total - target
    order = range(len(values)) if direction == TruncationDirection.CUT_LARGE else range(len(values) - 1, -1, -1)

    lambda_star = float(values[0]) if direction == TruncationDirection.CUT_LARGE else float(values[values > 0.0][-1])
    fractional_cut = 0.0
    if budget <= 0.0:
        return nu, lambda_star, fractional_cut

    for i in order:
        v = float(values[i])
        if v <= 0.0:
            continue
        lambda_star = v
        if v <= budget + CUT_RTOL * v:
            nu[i] = 0.0
            budget -= v
            if budget <= 0.0:
                break
            continue
        if budget > CUT_RTOL * v:
            nu[i] = v - budget
            fractional_cut = budget / v
        break
    return nu, lambda_star, fractional_cut


def truncate_spectrum(
    s: SpectrumLike,
    target_fidelity: float,
    direction: TruncationDirection = TruncationDirection.CUT_LARGE,
) -> TruncationResult:
    """Remove weight from the largest (cut_large) or smallest (cut_small) eigenvalues
    until the retained weight equals `target_fidelity`."""
    s = as_spectrum(s)
    direction = TruncationDirection(direction)
    if not target_fidelity > 0.0:
        raise ParameterRangeError(f"Target fidelity must be positive, got {target_fidelity}")
    if target_fidelity > s.total_weight + 1e-12:
        raise ParameterRangeError(
            f"Target fidelity {target_fidelity} exceeds the achievable retained weight {s.total_weight}"
        )
    if s.dim > config.max_dim:
        raise ParameterRangeError(f"Spectrum of dimension {s.dim} exceeds max_dim; use the type-class engine")

    nu, lambda_star, fractional_cut = truncate_values(s.values(), target_fidelity, direction)
    smoothed = Spectrum.from_values(nu)
    return TruncationResult(
        smoothed=smoothed,
        lambda_star=lambda_star,
        fractional_cut=fractional_cut,
        achieved_fidelity=smoothed.total_weight,
        direction=direction,
        target_fidelity=target_fidelity,
    )
