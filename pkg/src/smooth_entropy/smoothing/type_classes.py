"""
Type-class engine for the spectra of i.i.d. tensor powers.

The eigenvalues of rho^{(x)n} are products prod_i lambda_i^{k_i} over
occupation patterns k with sum k = n. Each pattern (a type class) carries the
multiplicity multinomial(n; k) * prod_i m_i^{k_i}, held as an exact Python
integer, so smoothing runs over O(n^{d-1}) classes instead of d^n
eigenvalues. Weights are formed in log2 space and summed with math.fsum.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, List, Tuple, Union

import numpy as np

from smooth_entropy.config import config
from smooth_entropy.exceptions import DimensionError, ParameterRangeError, StateValidationError
from smooth_entropy.smoothing.smooth import _check_epsilon, h0_target, hmin_target
from smooth_entropy.smoothing.spectrum import CUT_RTOL, Spectrum, SpectrumLike, as_spectrum
from smooth_entropy.types import SmoothMeasure

logger = logging.getLogger(__name__)

MAX_COPIES = 10_000
MAX_BASE_DISTINCT = 4
CLASS_MERGE_TOL = 1e-12


@lru_cache(maxsize=65536)
def _comb(n: int, k: int) -> int:
    return math.comb(n, k)


def _multinomial(n: int, ks: Tuple[int, ...]) -> int:
    result, remaining = 1, n
    for k in ks:
        result *= _comb(remaining, k)
        remaining -= k
    return result


def _compositions(n: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """All (k_1..k_parts) with k_i >= 0 and sum n, lexicographically descending."""
    if parts == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def _log2_int(x: int) -> float:
    """log2 of a positive integer of any size."""
    if x < (1 << 1000):
        return math.log2(x)
    shift = x.bit_length() - 64
    return math.log2(x >> shift) + shift


def _floor_pow2(x: float) -> int:
    """floor(2**x) for large x without float overflow."""
    if x < 1000.0:
        return int(math.floor(2.0 ** x))
    whole = int(math.floor(x))
    mantissa = int(math.floor(2.0 ** (x - whole + 52)))
    return mantissa << (whole - 52)


@dataclass(frozen=True)
class TypeClassSpectrum:
    """Spectrum of base^{(x)n} as (log2 eigenvalue, multiplicity) classes,
    log-values strictly decreasing."""
    base: Spectrum
    n: int
    classes: Tuple[Tuple[float, int], ...]

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.classes)

    def log2_weights(self) -> List[float]:
        return [lv + _log2_int(m) if lv != -math.inf else -math.inf for lv, m in self.classes]

    @property
    def total_weight(self) -> float:
        return math.fsum(2.0 ** lw for lw in self.log2_weights() if lw != -math.inf)

    def __len__(self) -> int:
        return len(self.classes)


def _merge_classes(ordered: Iterable[Tuple[float, int]]) -> Tuple[Tuple[float, int], ...]:
    """Merge neighbours of a descending (log2 value, multiplicity) sequence
    whose log-values agree to CLASS_MERGE_TOL."""
    classes: List[Tuple[float, int]] = []
    for lv, mult in ordered:
        if classes:
            prev_lv, prev_mult = classes[-1]
            same = (prev_lv == lv) or (
                lv != -math.inf and abs(prev_lv - lv) <= CLASS_MERGE_TOL * max(1.0, abs(lv))
            )
            if same:
                classes[-1] = (prev_lv, prev_mult + mult)
                continue
        classes.append((lv, mult))
    return tuple(classes)


def tensor_power_spectrum(base: SpectrumLike, n: int) -> TypeClassSpectrum:
    """Enumerate the type classes of the n-fold tensor power of `base`."""
    base = as_spectrum(base)
    if n < 1 or n > MAX_COPIES:
        raise ParameterRangeError(f"Copy count must lie in [1, {MAX_COPIES}], got {n}")
    d = base.distinct
    if d > MAX_BASE_DISTINCT:
        raise DimensionError(f"Type-class engine supports at most {MAX_BASE_DISTINCT} distinct eigenvalues, got {d}")
    n_classes = math.comb(n + d - 1, d - 1)
    if n_classes > config.max_type_classes:
        raise DimensionError(
            f"{n_classes} type classes for n={n}, d={d} exceeds max_type_classes={config.max_type_classes}"
        )

    log_values = [math.log2(v) if v > 0.0 else -math.inf for v, _ in base.entries]
    mults = [m for _, m in base.entries]

    raw = []
    for ks in _compositions(n, d):
        if any(k > 0 and log_values[i] == -math.inf for i, k in enumerate(ks)):
            lv = -math.inf
        else:
            lv = math.fsum(k * log_values[i] for i, k in enumerate(ks) if k > 0)
        mult = _multinomial(n, ks)
        for i, k in enumerate(ks):
            if k and mults[i] > 1:
                mult *= mults[i] ** k
        raw.append((lv, ks, mult))
    raw.sort(key=lambda item: (-item[0], tuple(-k for k in item[1])))

    classes = _merge_classes((lv, mult) for lv, _, mult in raw)
    result = TypeClassSpectrum(base=base, n=n, classes=classes)
    expected = base.dim ** n
    if result.total_multiplicity != expected:
        raise StateValidationError(
            f"Type-class multiplicities sum to {result.total_multiplicity}, expected {base.dim}^{n}"
        )
    logger.debug(f"tensor_power_spectrum: n={n}, d={d}, {len(classes)} classes")
    return result


def product_type_classes(first: TypeClassSpectrum, second: TypeClassSpectrum) -> TypeClassSpectrum:
    """Classes of (a (x) b)^{(x)n} from the classes of a^{(x)n} and b^{(x)n}.

    Every pair of factor classes gives one product class, so the count is
    len(first) * len(second) rather than the compositions of n into
    distinct(a) * distinct(b) parts.
    """
    if first.n != second.n:
        raise ParameterRangeError(f"Factor classes are for n={first.n} and n={second.n}")
    n_pairs = len(first) * len(second)
    if n_pairs > config.max_type_classes:
        raise DimensionError(f"{n_pairs} paired classes exceeds max_type_classes={config.max_type_classes}")

    pairs = [
        (la + lb if la != -math.inf and lb != -math.inf else -math.inf, ma * mb)
        for la, ma in first.classes
        for lb, mb in second.classes
    ]
    pairs.sort(key=lambda item: -item[0])
    base = as_spectrum(np.kron(first.base.values(), second.base.values()))
    logger.debug(f"product_type_classes: n={first.n}, {n_pairs} pairs")
    return TypeClassSpectrum(base=base, n=first.n, classes=_merge_classes(pairs))


def _hmin_from_classes(classes: Tuple[Tuple[float, int], ...], budget: float) -> float:
    """-log2 of the largest eigenvalue left after removing `budget` weight from the top."""
    live = [(lv, m) for lv, m in classes if lv != -math.inf]
    if budget <= 0.0:
        return -live[0][0]
    for idx, (lv, mult) in enumerate(live):
        v = 2.0 ** lv
        w = 2.0 ** (lv + _log2_int(mult))
        if w <= budget + CUT_RTOL * v:
            budget -= w
            if budget <= 0.0:
                # Whole classes used up the budget exactly
                return -live[idx + 1][0] if idx + 1 < len(live) else math.inf
            continue
        if budget <= CUT_RTOL * v:
            return -lv
        # Fewer than mult - 1 copies' worth removed: an uncut copy survives at v
        if mult > 1 and math.log2(budget) - lv <= _log2_int(mult - 1) + 1e-12:
            return -lv
        remainder = w - budget
        next_value = 2.0 ** live[idx + 1][0] if idx + 1 < len(live) else 0.0
        return -math.log2(max(remainder, next_value))
    return math.inf


def _h0_from_classes(classes: Tuple[Tuple[float, int], ...], budget: float) -> float:
    """log2 of the rank left after removing `budget` weight from the bottom."""
    live = [(lv, m) for lv, m in classes if lv != -math.inf]
    if budget <= 0.0:
        return _log2_int(sum(m for _, m in live))
    ascending = list(reversed(live))
    for idx, (lv, mult) in enumerate(ascending):
        v = 2.0 ** lv
        w = 2.0 ** (lv + _log2_int(mult))
        if w <= budget + CUT_RTOL * v:
            budget -= w
            if budget <= 0.0:
                return _log2_int(sum(m for _, m in ascending[idx + 1:]))
            continue
        larger = sum(m for _, m in ascending[idx + 1:])
        if budget <= CUT_RTOL * v:
            return _log2_int(larger + mult)
        zeroed = _floor_pow2(math.log2(budget) - lv + math.log2(1.0 + CUT_RTOL))
        return _log2_int(larger + mult - min(zeroed, mult - 1))
    raise ParameterRangeError("Truncation removed the whole spectrum")


def _normalized_classes(base: Union[SpectrumLike, TypeClassSpectrum], n: int) -> Tuple[TypeClassSpectrum, float]:
    tps = base if isinstance(base, TypeClassSpectrum) else tensor_power_spectrum(base, n)
    if tps.n != n:
        raise ParameterRangeError(f"Precomputed type classes are for n={tps.n}, not n={n}")
    total = tps.total_weight
    if abs(total - 1.0) > 1e-9:
        raise StateValidationError(f"Tensor-power weight {total!r} is not 1; the base spectrum must be normalized")
    return tps, total


def smooth_entropy_iid(
    base: Union[SpectrumLike, TypeClassSpectrum],
    n: int,
    epsilon: float,
    measure: SmoothMeasure,
    ball_certified: bool = False,
) -> float:
    """Truncation-construction smooth entropy of base^{(x)n}, in bits.

    hmin gives a lower bound on the smooth min-entropy, h0 an upper bound on
    the smooth 0th-order Renyi entropy. Weight is removed class by class with
    a fractional cut inside one class, which is the single-copy rule applied to
    the sorted d^n eigenvalues.
    """
    _check_epsilon(epsilon)
    measure = SmoothMeasure(measure)
    tps, total = _normalized_classes(base, n)

    if measure == SmoothMeasure.HMIN:
        return _hmin_from_classes(tps.classes, total - hmin_target(epsilon))
    return _h0_from_classes(tps.classes, total - h0_target(epsilon, ball_certified))


def truncated_vn_iid(base: Union[SpectrumLike, TypeClassSpectrum], n: int, epsilon: float) -> float:
    """H(tau / c) - log2 c for the cut-large truncation tau of base^{(x)n}, c = Tr tau.

    For a product source a (x) b this is H(A^n|B^n) of tau_A (x) b^{(x)n}, a
    candidate inside the epsilon-ball, so it bounds the smooth conditional
    min-entropy from above. It is never below n H(a): zeroing the largest
    eigenvalues and renormalizing leaves a spectrum majorized by the original.
    """
    _check_epsilon(epsilon)
    tps, total = _normalized_classes(base, n)
    budget = total - hmin_target(epsilon)

    # (weight, log2 eigenvalue) of what the truncation keeps
    kept: List[Tuple[float, float]] = []
    for lv, mult in tps.classes:
        if lv == -math.inf:
            continue
        w = 2.0 ** (lv + _log2_int(mult))
        if budget <= 0.0:
            kept.append((w, lv))
            continue
        v = 2.0 ** lv
        if w <= budget + CUT_RTOL * v:
            budget -= w
            continue
        if budget <= CUT_RTOL * v:
            kept.append((w, lv))
            budget = 0.0
            continue
        zeroed = min(_floor_pow2(math.log2(budget) - lv), mult - 1)
        left = budget - (2.0 ** (lv + _log2_int(zeroed)) if zeroed else 0.0)
        left = min(max(left, 0.0), v)
        intact = mult - zeroed - 1
        if intact:
            kept.append((2.0 ** (lv + _log2_int(intact)), lv))
        if v - left > 0.0:
            kept.append((v - left, math.log2(v - left)))
        budget = 0.0

    retained = math.fsum(w for w, _ in kept)
    return math.fsum(-w * lv for w, lv in kept) / retained
