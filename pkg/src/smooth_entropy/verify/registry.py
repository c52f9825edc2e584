"""
Registry of verification checks.

Every check draws its inputs from the trial seed, evaluates both sides of one
claim and returns a Measurement. Claims read lhs <= rhs; equality claims set
`equality` and score slack as -|lhs - rhs|. Checks registered with
bound_mode compare certified bounds in the direction that a true statement
can never violate.
"""

import hashlib
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from smooth_entropy.entropies.functionals import (
    conditional_vn,
    conditional_vn_subnormalized,
    eta,
    fannes_bound,
    h0,
    hmin,
    relative_entropy,
    renyi_of_spectrum,
    von_neumann,
    vn_of_spectrum,
)
from smooth_entropy.exceptions import UnknownCheckError
from smooth_entropy.linalg.core import (
    apply_projection,
    apply_unitary,
    group_subsystems,
    partial_trace,
)
from smooth_entropy.linalg.io import state_to_json
from smooth_entropy.linalg.operators import MultipartiteState
from smooth_entropy.linalg.random import derive_seed, make_rng, random_density, random_spectrum, random_unitary
from smooth_entropy.metrics.distances import fidelity, purified_distance, reorder_to_eigenbasis, uhlmann_pair
from smooth_entropy.minentropy.conditional import hmin_conditional
from smooth_entropy.smoothing.conditional import ORACLE_MAX_DIM, conditional_oracle, smooth_hmin_conditional_bounds
from smooth_entropy.smoothing.smooth import hmin_target, smooth_h0, smooth_hmin_unconditional, truncated_state
from smooth_entropy.smoothing.spectrum import truncate_values
from smooth_entropy.smoothing.type_classes import (
    product_type_classes,
    smooth_entropy_iid,
    tensor_power_spectrum,
    truncated_vn_iid,
)
from smooth_entropy.types import SmoothMeasure, TruncationDirection

logger = logging.getLogger(__name__)

LINALG_TOL = 1e-9
SDP_TOL = 1e-6
QAEP_RATE_WINDOW = 0.05
QAEP_COPY_GRID = (100, 250, 500, 1000, 2000)
CHAIN_RULE_ORACLE_GRID = 2
RENYI_LIMIT_WINDOW = 0.01
RENYI_LIMIT_STEP = 1e-3
REFERENCE_QAEP_BASE = (0.75, 0.25)


@dataclass(frozen=True)
class TrialContext:
    index: int
    seed: int
    dims: Tuple[int, ...]
    epsilon: Optional[float] = None
    alpha: Optional[float] = None
    n: Optional[int] = None


@dataclass
class Measurement:
    lhs: float
    rhs: float
    slack: Optional[float] = None
    equality: bool = False
    bound_mode: bool = False
    state: Optional[MultipartiteState] = None
    spectrum: Optional[Sequence[float]] = None
    details: Dict[str, float] = field(default_factory=dict)

    def resolved_slack(self) -> float:
        if self.slack is not None:
            return self.slack
        if self.equality:
            return -abs(self.lhs - self.rhs)
        return self.rhs - self.lhs

    def digest(self) -> str:
        h = hashlib.sha256()
        if self.state is not None:
            h.update(repr(self.state.dims).encode())
            h.update(np.ascontiguousarray(self.state.matrix).tobytes())
        if self.spectrum is not None:
            h.update(np.ascontiguousarray(np.asarray(self.spectrum, dtype=float)).tobytes())
        return h.hexdigest()[:16]

    def reproduction_json(self) -> str:
        if self.state is not None:
            return state_to_json(self.state).strip()
        return json.dumps({"spectrum": [float(v) for v in (self.spectrum or [])]})


CheckFn = Callable[[TrialContext], Measurement]


@dataclass(frozen=True)
class CheckEntry:
    check_id: str
    claim: str
    anchor: str
    fn: CheckFn
    bound_mode: bool
    defaults: Dict[str, object]


REGISTRY: Dict[str, CheckEntry] = {}


def register(check_id: str, claim: str, anchor: str, bound_mode: bool = False, **defaults):
    def decorator(fn: CheckFn) -> CheckFn:
        REGISTRY[check_id] = CheckEntry(
            check_id=check_id, claim=claim, anchor=anchor, fn=fn, bound_mode=bound_mode, defaults=defaults
        )
        return fn
    return decorator


def get_check(check_id: str) -> CheckEntry:
    try:
        return REGISTRY[check_id]
    except KeyError:
        raise UnknownCheckError(f"Unknown check '{check_id}'. Registered: {', '.join(sorted(REGISTRY))}")


def list_checks() -> List[CheckEntry]:
    return [REGISTRY[k] for k in sorted(REGISTRY)]


# --- helpers ---

def _state(ctx: TrialContext, stream: int = 0) -> MultipartiteState:
    seed = ctx.seed if stream == 0 else derive_seed(ctx.seed, stream)
    return random_density(ctx.dims, seed=seed)


def _maybe_subnormalized(ctx: TrialContext, stream: int) -> MultipartiteState:
    """Random state, scaled into [0.5, 1] on odd trials."""
    rho = _state(ctx, stream)
    if ctx.index % 2 == 1:
        factor = float(make_rng(derive_seed(ctx.seed, 100 + stream)).uniform(0.5, 1.0))
        rho = rho.scaled(factor)
    return rho


def _spectrum(ctx: TrialContext, stream: int = 0) -> np.ndarray:
    seed = ctx.seed if stream == 0 else derive_seed(ctx.seed, stream)
    return random_spectrum(math.prod(ctx.dims), seed=seed)


def _spectral_power(values: np.ndarray, n: int) -> np.ndarray:
    out = np.ones(1)
    for _ in range(n):
        out = np.kron(out, values)
    return np.sort(out)[::-1]


def _log2_or_neg_inf(x: float) -> float:
    return math.log2(x) if x > 0.0 else -math.inf


def _trace_out_last(sigma: np.ndarray, d_keep: int, d_last: int) -> np.ndarray:
    return np.einsum("ikjk->ij", sigma.reshape(d_keep, d_last, d_keep, d_last))


# --- data processing ---

@register(
    "dpi_smooth",
    claim="H_min^eps(A|BC) <= H_min^eps(A|B)",
    anchor="Data processing inequality for the smooth conditional min-entropy",
    bound_mode=True,
    dims=[(2, 2, 2)],
    epsilons=[0.0],
    tolerance=SDP_TOL,
)
def check_dpi_smooth(ctx: TrialContext) -> Measurement:
    rho = _state(ctx)
    eps = ctx.epsilon or 0.0
    if eps == 0.0:
        h_abc, _ = hmin_conditional(group_subsystems(rho, [[0], [1, 2]]))
        h_ab, _ = hmin_conditional(partial_trace(rho, [0, 1]))
        return Measurement(lhs=h_abc, rhs=h_ab, state=rho)

    # Witness in the ball around rho_ABC, traced down to AB as in the proof
    tilde = truncated_state(rho, hmin_target(eps), TruncationDirection.CUT_LARGE)
    tilde_ab = partial_trace(tilde, [0, 1])
    h_abc, _ = hmin_conditional(group_subsystems(tilde, [[0], [1, 2]]))
    h_ab, _ = hmin_conditional(tilde_ab)
    pd = purified_distance(partial_trace(rho, [0, 1]), tilde_ab).value
    return Measurement(
        lhs=h_abc,
        rhs=h_ab,
        slack=min(h_ab - h_abc, eps - pd),
        bound_mode=True,
        state=rho,
        details={"traced_witness_pd": pd},
    )


@register(
    "dpi_witness_trace",
    claim="Tr_C of the optimal sigma_BC is feasible for A|B at the same lambda",
    anchor="Partial trace over C preserves the operator inequality (positive map)",
    dims=[(2, 2, 2)],
    tolerance=1e-7,
)
def check_dpi_witness_trace(ctx: TrialContext) -> Measurement:
    rho = _state(ctx)
    d_a, d_b, d_c = rho.dims
    lam, solution = hmin_conditional(group_subsystems(rho, [[0], [1, 2]]))
    sigma_b = _trace_out_last(solution.sigma_b, d_b, d_c)
    bound = np.kron(np.eye(d_a), sigma_b) - partial_trace(rho, [0, 1]).matrix
    min_eig = float(np.linalg.eigvalsh(0.5 * (bound + bound.conj().T))[0])
    return Measurement(lhs=0.0, rhs=min_eig, state=rho, details={"lambda": lam})


@register(
    "dpi_vn",
    claim="H(A|BC) <= H(A|B)",
    anchor="Data processing inequality for the conditional von Neumann entropy",
    dims=[(2, 2, 2)],
    tolerance=LINALG_TOL,
)
def check_dpi_vn(ctx: TrialContext) -> Measurement:
    rho = _state(ctx)
    lhs = conditional_vn(rho, cond_on=(1, 2)).value
    rhs = conditional_vn(partial_trace(rho, [0, 1]), cond_on=(1,)).value
    return Measurement(lhs=lhs, rhs=rhs, state=rho)


@register(
    "ssa_equiv",
    claim="S(AB) + S(BC) - S(ABC) - S(B) equals H(A|B) - H(A|BC) and is nonnegative",
    anchor="Strong subadditivity is equivalent to the von Neumann data processing inequality",
    dims=[(2, 2, 2)],
    tolerance=LINALG_TOL,
)
def check_ssa_equiv(ctx: TrialContext) -> Measurement:
    rho = _state(ctx)
    def s(keep):
        return von_neumann(partial_trace(rho, keep)).value

    ssa = s([0, 1]) + s([1, 2]) - s([0, 1, 2]) - s([1])
    dpi = conditional_vn(partial_trace(rho, [0, 1]), cond_on=(1,)).value - conditional_vn(rho, cond_on=(1, 2)).value
    return Measurement(lhs=ssa, rhs=dpi, slack=min(-abs(ssa - dpi), ssa), state=rho, details={"ssa": ssa})


# --- chain rule and conditional bounds ---

@register(
    "chain_rule",
    claim="H_min^eps(AB) - H_0^eps(B) <= H_min^{3 eps}(A|B), also against the grid oracle at 3 eps",
    anchor="Chain rule for smooth min- and 0th-order entropies",
    bound_mode=True,
    dims=[(2, 2)],
    epsilons=[0.0, 0.05, 0.1],
    tolerance=SDP_TOL,
)
def check_chain_rule(ctx: TrialContext) -> Measurement:
    rho = _state(ctx)
    eps = ctx.epsilon or 0.0
    if eps == 0.0:
        lhs = hmin(rho).value - h0(partial_trace(rho, [1])).value
        rhs, _ = hmin_conditional(rho)
        return Measurement(lhs=lhs, rhs=rhs, state=rho)

    # Any state in the 3 eps ball has Tr >= 1 - 9 eps^2, capping H_min(A|B) at log2 d_A - log2 Tr
    bounds = smooth_hmin_conditional_bounds(rho, eps)
    cap = math.log2(rho.dims[0]) - math.log2(1.0 - (3.0 * eps) ** 2)
    details = {"hmin_exact": bounds.hmin_exact, "upper": bounds.upper}
    slack = cap - bounds.lower
    if rho.state.dim <= ORACLE_MAX_DIM:
        oracle = conditional_oracle(rho, 3.0 * eps, grid=CHAIN_RULE_ORACLE_GRID)
        details["oracle_3eps"] = oracle.value
        slack = min(slack, oracle.value - bounds.lower)
    return Measurement(
        lhs=bounds.lower,
        rhs=cap,
        slack=slack,
        bound_mode=True,
        state=rho,
        details=details,
    )


@register(
    "upper_candidate",
    claim="H_min(A|B)_rho <= H(A|B) of the ball-certified truncation of rho",
    anchor="Conditional smooth min-entropy is bounded by the conditional von Neumann entropy",
    bound_mode=True,
    dims=[(2, 2), (3, 2)],
    epsilons=[0.05, 0.1],
    tolerance=SDP_TOL,
)
def check_upper_candidate(ctx: TrialContext) -> Measurement:
    rho = _state(ctx)
    eps = ctx.epsilon if ctx.epsilon is not None else 0.05
    tilde = truncated_state(rho, hmin_target(eps), TruncationDirection.CUT_LARGE)
    lhs, _ = hmin_conditional(rho)
    rhs = conditional_vn_subnormalized(tilde).value
    hmin_tilde, _ = hmin_conditional(tilde)
    return Measurement(lhs=lhs, rhs=rhs, bound_mode=True, state=rho, details={"hmin_candidate": hmin_tilde})


# --- unconditional smoothing ---

@register(
    "renyi_hmin_bound",
    claim="H_alpha + log2(1 - sqrt(1 - eps^2)) / (alpha - 1) <= H_min^eps, alpha > 1",
    anchor="Lower bound on the smooth min-entropy by Renyi entropies",
    dims=[(2,), (3,), (4,)],
    epsilons=[0.1, 0.3, 0.6],
    alphas=[1.5, 2.0, 4.0],
    tolerance=LINALG_TOL,
)
def check_renyi_hmin_bound(ctx: TrialContext) -> Measurement:
    lam = _spectrum(ctx)
    eps, alpha = ctx.epsilon, ctx.alpha
    lhs = renyi_of_spectrum(lam, alpha) + _log2_or_neg_inf(1.0 - math.sqrt(1.0 - eps * eps)) / (alpha - 1.0)
    rhs = smooth_hmin_unconditional(lam, eps)
    return Measurement(lhs=lhs, rhs=rhs, spectrum=lam)


@register(
    "renyi_h0_bound",
    claim="H_0^eps <= H_alpha + alpha log2(1 - sqrt(1 - eps)) / (alpha - 1), alpha < 1",
    anchor="Upper bound on the smooth 0th-order Renyi entropy by Renyi entropies",
    dims=[(2,), (3,), (4,)],
    epsilons=[0.1, 0.3, 0.6],
    alphas=[0.6, 0.75, 0.9],
    tolerance=LINALG_TOL,
)
def check_renyi_h0_bound(ctx: TrialContext) -> Measurement:
    """With delta = 1 - sqrt(1 - eps) removed from the bottom, the smallest kept
    eigenvalue l obeys delta <= l^(1 - alpha) sum lambda^alpha and the kept
    count N obeys N l^alpha <= sum lambda^alpha, which gives the alpha factor."""
    lam = _spectrum(ctx)
    eps, alpha = ctx.epsilon, ctx.alpha
    h_alpha = renyi_of_spectrum(lam, alpha)
    lhs = smooth_h0(lam, eps)
    correction = _log2_or_neg_inf(1.0 - math.sqrt(1.0 - eps)) / (alpha - 1.0)
    rhs = h_alpha + alpha * correction
    # Looser and literal forms are reported alongside, not asserted
    loose_rhs = h_alpha + correction
    literal_rhs = h_alpha + math.log2(math.sqrt(1.0 - eps)) / (alpha - 1.0)
    return Measurement(
        lhs=lhs,
        rhs=rhs,
        spectrum=lam,
        details={
            "slack": rhs - lhs,
            "loose_rhs": loose_rhs,
            "literal_rhs": literal_rhs,
            "literal_slack": literal_rhs - lhs,
        },
    )


@register(
    "qaep_unconditional",
    claim="(1/n) H_min^eps(A^n) and (1/n) H_0^eps(A^n) approach H(A) from below and above",
    anchor="Asymptotic equipartition for the unconditional smooth min- and 0th-order entropies",
    dims=[(2,)],
    epsilons=[0.05],
    n_values=[2000],
    trials=3,
    tolerance=LINALG_TOL,
)
def check_qaep_unconditional(ctx: TrialContext) -> Measurement:
    """Rates bracket H(A) and the min-entropy gap shrinks along the copy grid.

    The reference source (trial 0) must also land both rates inside
    QAEP_RATE_WINDOW of H(A) at the largest n.
    """
    base = np.asarray(REFERENCE_QAEP_BASE) if ctx.index == 0 else _spectrum(ctx)
    n = ctx.n or 2000
    eps = ctx.epsilon if ctx.epsilon is not None else 0.05
    target = vn_of_spectrum(base)
    grid = sorted({m for m in QAEP_COPY_GRID if m < n} | {n})
    gaps = [target - smooth_entropy_iid(base, m, eps, SmoothMeasure.HMIN) / m for m in grid]
    hmin_rate = target - gaps[-1]
    h0_rate = smooth_entropy_iid(base, n, eps, SmoothMeasure.H0) / n
    shrink = min((a - b for a, b in zip(gaps, gaps[1:])), default=math.inf)

    bounds = [target - hmin_rate, h0_rate - target, shrink]
    if ctx.index == 0:
        bounds += [QAEP_RATE_WINDOW - abs(hmin_rate - target), QAEP_RATE_WINDOW - abs(h0_rate - target)]
    details = {"h0_rate": h0_rate, "gap": gaps[-1], "min_shrink": shrink}
    details.update({f"gap_n{m}": g for m, g in zip(grid, gaps)})
    return Measurement(lhs=hmin_rate, rhs=target, slack=min(bounds), spectrum=base, details=details)


@register(
    "qaep_conditional_sandwich",
    claim="(1/n)[H_min^eps(A^nB^n) - H_0^eps(B^n)] <= H(A|B) <= (1/n) H(A^n|B^n) of a truncated candidate, "
    "gap shrinking in n, on product states",
    anchor="Lower and upper bounds on the conditional smooth min-entropy of i.i.d. states",
    bound_mode=True,
    dims=[(2, 2)],
    epsilons=[0.01],
    n_values=[400],
    trials=5,
    tolerance=LINALG_TOL,
)
def check_qaep_conditional_sandwich(ctx: TrialContext) -> Measurement:
    """Sandwich on rho_A (x) rho_B over the grid n/8, n/4, n/2, n.

    The joint classes pair the classes of each factor. The upper candidate is
    tau_A (x) rho_B^{(x)n} with tau_A the cut-large truncation of rho_A^{(x)n},
    which stays in the epsilon-ball because rho_B^{(x)n} is untouched.
    """
    d_a, d_b = ctx.dims
    p_a = random_spectrum(d_a, seed=ctx.seed)
    p_b = random_spectrum(d_b, seed=derive_seed(ctx.seed, 1))
    n = ctx.n or 400
    eps = ctx.epsilon if ctx.epsilon is not None else 0.01
    target = vn_of_spectrum(p_a)

    grid = sorted({max(1, n // k) for k in (8, 4, 2, 1)})
    lower, upper = [], []
    for m in grid:
        classes_a = tensor_power_spectrum(p_a, m)
        classes_b = tensor_power_spectrum(p_b, m)
        joint = smooth_entropy_iid(product_type_classes(classes_a, classes_b), m, eps, SmoothMeasure.HMIN)
        marginal = smooth_entropy_iid(classes_b, m, eps, SmoothMeasure.H0, ball_certified=True)
        lower.append((joint - marginal) / m)
        upper.append(truncated_vn_iid(classes_a, m, eps) / m)

    gaps = [u - lo for u, lo in zip(upper, lower)]
    shrink = min((a - b for a, b in zip(gaps, gaps[1:])), default=math.inf)
    details = {"upper_rate": upper[-1], "gap": gaps[-1], "min_shrink": shrink}
    details.update({f"gap_n{m}": g for m, g in zip(grid, gaps)})
    return Measurement(
        lhs=lower[-1],
        rhs=upper[-1],
        slack=min(target - lower[-1], upper[-1] - target, shrink),
        bound_mode=True,
        spectrum=np.sort(np.kron(p_a, p_b))[::-1],
        details=details,
    )


# --- purified distance ---

def _random_projector(d: int, seed: int) -> np.ndarray:
    u = random_unitary(d, seed=seed)
    k = max(1, d // 2)
    return u[:, :k] @ u[:, :k].conj().T


@register(
    "pd_monotone",
    claim="P(E(rho), E(sigma)) <= P(rho, sigma) for partial traces and projections",
    anchor="Purified distance is monotone under trace non-increasing CP maps",
    dims=[(2, 2), (2, 2, 2)],
    tolerance=LINALG_TOL,
)
def check_pd_monotone(ctx: TrialContext) -> Measurement:
    rho = _maybe_subnormalized(ctx, 0)
    sigma = _maybe_subnormalized(ctx, 1)
    if ctx.index % 4 < 2:
        keep = list(range(len(ctx.dims) - 1))
        mapped_rho, mapped_sigma = partial_trace(rho, keep), partial_trace(sigma, keep)
    else:
        proj = _random_projector(rho.state.dim, derive_seed(ctx.seed, 2))
        mapped_rho, mapped_sigma = apply_projection(rho, proj), apply_projection(sigma, proj)
    lhs = purified_distance(mapped_rho, mapped_sigma).value
    rhs = purified_distance(rho, sigma).value
    # sqrt(2 D) envelope, reported only
    d_rel = relative_entropy(rho, sigma)
    envelope = math.sqrt(2.0 * d_rel) if math.isfinite(d_rel) and d_rel >= 0.0 else math.inf
    return Measurement(lhs=lhs, rhs=rhs, state=rho, details={"sqrt_2d_envelope": envelope})


@register(
    "pd_triangle",
    claim="P(rho, tau) <= P(rho, sigma) + P(sigma, tau)",
    anchor="Triangle inequality for the purified distance",
    dims=[(2,), (3,), (2, 2)],
    tolerance=LINALG_TOL,
)
def check_pd_triangle(ctx: TrialContext) -> Measurement:
    rho, sigma, tau = (_maybe_subnormalized(ctx, k) for k in range(3))
    lhs = purified_distance(rho, tau).value
    rhs = purified_distance(rho, sigma).value + purified_distance(sigma, tau).value
    return Measurement(lhs=lhs, rhs=rhs, state=rho)


@register(
    "pd_reorder",
    claim="P(rho, sigma~) <= P(rho, sigma) with sigma~ sigma's spectrum on rho's eigenbasis",
    anchor="Aligning eigenbases with matching eigenvalue order never increases the purified distance",
    dims=[(2,), (3,), (4,)],
    tolerance=LINALG_TOL,
)
def check_pd_reorder(ctx: TrialContext) -> Measurement:
    rho = _state(ctx, 0)
    sigma = _maybe_subnormalized(ctx, 1)
    aligned = reorder_to_eigenbasis(rho, sigma)
    lhs = purified_distance(rho, aligned).value
    rhs = purified_distance(rho, sigma).value
    return Measurement(lhs=lhs, rhs=rhs, state=rho)


@register(
    "uhlmann",
    claim="|<psi|phi>| of the constructed purifications equals F(rho, sigma)",
    anchor="Uhlmann's theorem",
    dims=[(2,), (3,), (4,)],
    tolerance=1e-8,
)
def check_uhlmann(ctx: TrialContext) -> Measurement:
    rho, sigma = _state(ctx, 0), _state(ctx, 1)
    psi, phi = uhlmann_pair(rho, sigma)
    overlap = abs(psi.overlap(phi))
    return Measurement(lhs=overlap, rhs=fidelity(rho, sigma).value, equality=True, state=rho)


# --- limits ---

@register(
    "fannes_limit",
    claim="(1/n)|H(sigma_n) - H(rho^n)| <= delta log2 d + h(delta)/n for smoothed tensor powers",
    anchor="Fannes-type continuity of the von Neumann entropy on almost i.i.d. states",
    dims=[(2,), (3,)],
    epsilons=[0.05, 0.1],
    n_values=[2, 4, 6],
    tolerance=LINALG_TOL,
)
def check_fannes_limit(ctx: TrialContext) -> Measurement:
    lam = _spectrum(ctx)
    d = lam.size
    n = ctx.n or 4
    eps = ctx.epsilon if ctx.epsilon is not None else 0.05
    power = _spectral_power(lam, n)
    nu, _, _ = truncate_values(power, hmin_target(eps), TruncationDirection.CUT_LARGE)
    smoothed = nu / nu.sum()
    # Co-diagonal, so the trace distance is half the l1 distance of the spectra
    delta = min(1.0, 0.5 * float(np.sum(np.abs(power - smoothed))))
    lhs = abs(vn_of_spectrum(smoothed) - vn_of_spectrum(power)) / n
    rhs = delta * math.log2(d) + (eta(delta) + eta(1.0 - delta)) / n
    return Measurement(
        lhs=lhs,
        rhs=rhs,
        spectrum=lam,
        details={"trace_distance": delta, "fannes_trend": fannes_bound(eps, d ** n) / n},
    )


@register(
    "renyi_to_vn",
    claim="|H_{1 +- 1e-3} - H| <= 0.01",
    anchor="Renyi entropies converge to the von Neumann entropy as alpha -> 1",
    dims=[(2,), (3,), (4,)],
    tolerance=LINALG_TOL,
)
def check_renyi_to_vn(ctx: TrialContext) -> Measurement:
    lam = _spectrum(ctx)
    h = vn_of_spectrum(lam)
    above = renyi_of_spectrum(lam, 1.0 + RENYI_LIMIT_STEP)
    below = renyi_of_spectrum(lam, 1.0 - RENYI_LIMIT_STEP)
    lhs = max(abs(above - h), abs(below - h))
    return Measurement(lhs=lhs, rhs=RENYI_LIMIT_WINDOW, spectrum=lam, details={"vn": h})


@register(
    "renyi_additivity",
    claim="H_alpha(rho^{(x)n}) = n H_alpha(rho)",
    anchor="Additivity of Renyi entropies under tensor powers",
    dims=[(2,), (3,)],
    alphas=[0.5, 2.0, 4.0],
    n_values=[2, 3],
    tolerance=LINALG_TOL,
)
def check_renyi_additivity(ctx: TrialContext) -> Measurement:
    lam = _spectrum(ctx)
    n = ctx.n or 2
    alpha = ctx.alpha if ctx.alpha is not None else 2.0
    lhs = renyi_of_spectrum(_spectral_power(lam, n), alpha)
    rhs = n * renyi_of_spectrum(lam, alpha)
    return Measurement(lhs=lhs, rhs=rhs, equality=True, spectrum=lam)


@register(
    "dpi_unitary",
    claim="H_min(A|B) is invariant under local unitaries U_A (x) U_B",
    anchor="Isometries on either side leave the conditional min-entropy unchanged",
    dims=[(2, 2), (3, 2)],
    tolerance=SDP_TOL,
)
def check_dpi_unitary(ctx: TrialContext) -> Measurement:
    rho = _state(ctx)
    d_a, d_b = rho.dims
    u = np.kron(random_unitary(d_a, seed=derive_seed(ctx.seed, 1)), random_unitary(d_b, seed=derive_seed(ctx.seed, 2)))
    before, _ = hmin_conditional(rho)
    after, _ = hmin_conditional(apply_unitary(rho, u))
    return Measurement(lhs=after, rhs=before, equality=True, state=rho)
