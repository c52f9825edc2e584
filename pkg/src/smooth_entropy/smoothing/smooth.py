"""
Smooth entropy evaluators built on spectrum truncation, and the grid oracle
used to measure how far the truncation constructions are from the optimum.
"""

import heapq
import itertools
import logging
import math
from typing import List, Optional, Sequence

import numpy as np

from smooth_entropy.exceptions import DimensionError, ParameterRangeError, StateValidationError
from smooth_entropy.linalg.core import eig_hermitian
from smooth_entropy.linalg.operators import MultipartiteState
from smooth_entropy.smoothing.spectrum import (
    Spectrum,
    SpectrumLike,
    TruncationResult,
    as_spectrum,
    truncate_spectrum,
    truncate_values,
)
from smooth_entropy.types import SmoothMeasure, TruncationDirection

logger = logging.getLogger(__name__)

BRUTE_FORCE_MAX_DIM = 4
BRUTE_FORCE_MIN_GRID = 100


def _check_epsilon(epsilon: float) -> None:
    if not 0.0 <= epsilon < 1.0:
        raise ParameterRangeError(f"epsilon must lie in [0, 1), got {epsilon}")


def _normalized_spectrum(rho_or_spectrum: SpectrumLike) -> Spectrum:
    s = as_spectrum(rho_or_spectrum)
    if not s.is_normalized():
        raise StateValidationError(f"Smoothing needs a normalized input, total weight is {s.total_weight!r}")
    return s


def hmin_target(epsilon: float) -> float:
    """Retained weight that keeps a co-diagonal truncation inside the epsilon-ball."""
    return math.sqrt(1.0 - epsilon * epsilon)


def h0_target(epsilon: float, ball_certified: bool = False) -> float:
    return hmin_target(epsilon) if ball_certified else math.sqrt(1.0 - epsilon)


def smooth_hmin_truncation(rho_or_spectrum: SpectrumLike, epsilon: float) -> TruncationResult:
    _check_epsilon(epsilon)
    return truncate_spectrum(_normalized_spectrum(rho_or_spectrum), hmin_target(epsilon), TruncationDirection.CUT_LARGE)


def smooth_h0_truncation(rho_or_spectrum: SpectrumLike, epsilon: float, ball_certified: bool = False) -> TruncationResult:
    _check_epsilon(epsilon)
    return truncate_spectrum(
        _normalized_spectrum(rho_or_spectrum),
        h0_target(epsilon, ball_certified),
        TruncationDirection.CUT_SMALL,
    )


def smooth_hmin_unconditional(rho_or_spectrum: SpectrumLike, epsilon: float) -> float:
    """Certified lower bound on the epsilon-smooth min-entropy, in bits.

    Truncates the largest eigenvalues down to retained weight sqrt(1 - eps^2)
    and returns -log2 of the largest remaining eigenvalue. Exact at eps = 0.
    """
    result = smooth_hmin_truncation(rho_or_spectrum, epsilon)
    return -math.log2(result.smoothed.max_value)


def smooth_h0(rho_or_spectrum: SpectrumLike, epsilon: float, ball_certified: bool = False) -> float:
    """Upper bound on the epsilon-smooth 0th-order Renyi entropy, in bits.

    The smallest eigenvalues are removed down to retained weight sqrt(1 - eps),
    or sqrt(1 - eps^2) with `ball_certified`, which keeps the construction
    inside the purified-distance ball. A fractionally cut eigenvalue still
    counts towards the rank.
    """
    result = smooth_h0_truncation(rho_or_spectrum, epsilon, ball_certified)
    return math.log2(result.smoothed.rank)


def truncated_state(
    rho: MultipartiteState,
    target_fidelity: float,
    direction: TruncationDirection = TruncationDirection.CUT_LARGE,
) -> MultipartiteState:
    """Apply the spectral truncation to `rho` in its own eigenbasis."""
    if not 0.0 < target_fidelity <= rho.trace + 1e-12:
        raise ParameterRangeError(f"Target fidelity {target_fidelity} outside (0, Tr rho]")
    vals, vecs = eig_hermitian(rho.matrix)
    vals = np.clip(vals, 0.0, None)
    nu, _, _ = truncate_values(vals, target_fidelity, TruncationDirection(direction))
    matrix = (vecs * nu[np.newaxis, :]) @ vecs.conj().T
    return MultipartiteState.from_matrix(matrix, dims=rho.dims, herm_tol=rho.state.herm_tol)


# --- grid oracle ---

def _best_fidelity(lam: Sequence[float], caps: Sequence[int], grid: int, deficit: float) -> float:
    """max over integer k (k_i <= caps_i, sum k <= grid) of
    sum sqrt(lam_i k_i / grid) + sqrt(deficit (1 - sum k / grid)).

    The first sum is separable and concave, so adding one grid unit at a time
    to the coordinate with the largest marginal gain is optimal for every
    total; the padding term is then maximized over the total.
    """
    counts = [0] * len(lam)
    heap = []
    for i, (l, cap) in enumerate(zip(lam, caps)):
        if l > 0.0 and cap > 0:
            heapq.heappush(heap, (-math.sqrt(l / grid), i))

    fidelity = 0.0
    best = math.sqrt(deficit)
    for total in range(1, grid + 1):
        if not heap:
            break
        neg_gain, i = heapq.heappop(heap)
        fidelity -= neg_gain
        counts[i] += 1
        if counts[i] < caps[i]:
            k = counts[i]
            gain = math.sqrt(lam[i] * (k + 1) / grid) - math.sqrt(lam[i] * k / grid)
            heapq.heappush(heap, (-gain, i))
        padding = math.sqrt(deficit * (1.0 - total / grid)) if deficit > 0.0 else 0.0
        best = max(best, fidelity + padding)
    return best


def brute_force_smooth(
    s: SpectrumLike,
    epsilon: float,
    measure: SmoothMeasure,
    grid: int = 1000,
    fidelity_slack: Optional[float] = None,
) -> float:
    """Grid optimum of the smooth entropy over co-diagonal subnormalized spectra.

    Candidates are nu_i = k_i / grid with sum nu <= 1, scored by the
    generalized fidelity to `s`. The hmin threshold is sqrt(1 - eps^2) and
    the h0 threshold sqrt(1 - eps), matching the truncation constructions.
    `fidelity_slack` relaxes the threshold; it defaults to 0 for eps > 0 and
    to the rounding loss d / (2 grid) at eps = 0, where no grid point would
    otherwise reach fidelity one.
    """
    _check_epsilon(epsilon)
    measure = SmoothMeasure(measure)
    s = as_spectrum(s)
    if s.dim > BRUTE_FORCE_MAX_DIM:
        raise DimensionError(f"brute_force_smooth supports dimension <= {BRUTE_FORCE_MAX_DIM}, got {s.dim}")
    if grid < BRUTE_FORCE_MIN_GRID:
        raise ParameterRangeError(f"grid must have at least {BRUTE_FORCE_MIN_GRID} points, got {grid}")

    lam: List[float] = [float(v) for v in s.values()]
    d = len(lam)
    deficit = max(0.0, 1.0 - s.total_weight)
    if fidelity_slack is None:
        fidelity_slack = d / (2.0 * grid) if epsilon == 0.0 else 0.0
    threshold = (hmin_target(epsilon) if measure == SmoothMeasure.HMIN else math.sqrt(1.0 - epsilon)) - fidelity_slack

    def feasible(caps: Sequence[int]) -> bool:
        return _best_fidelity(lam, caps, grid, deficit) >= threshold - 1e-12

    if measure == SmoothMeasure.HMIN:
        if not feasible([grid] * d):
            raise ParameterRangeError(f"No grid point of resolution {grid} reaches fidelity {threshold:.6g}")
        lo, hi = 1, grid
        while lo < hi:
            mid = (lo + hi) // 2
            if feasible([mid] * d):
                hi = mid
            else:
                lo = mid + 1
        value = -math.log2(lo / grid)
        logger.debug(f"brute_force_smooth hmin: cap level {lo}/{grid}, value {value:.12g}")
        return value

    support = [i for i, l in enumerate(lam) if l > 0.0]
    for r in range(1, len(support) + 1):
        for subset in itertools.combinations(support, r):
            caps = [grid if i in subset else 0 for i in range(d)]
            if feasible(caps):
                logger.debug(f"brute_force_smooth h0: support {subset} feasible")
                return math.log2(r)
    raise ParameterRangeError(f"No grid point of resolution {grid} reaches fidelity {threshold:.6g}")
