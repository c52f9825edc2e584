import logging
import math
from typing import Optional, Tuple

import numpy as np
import scipy.linalg
from pydantic import BaseModel, Field

from smooth_entropy.exceptions import StateValidationError
from smooth_entropy.linalg.operators import MultipartiteState
from smooth_entropy.minentropy.sdp import SdpProblem, SdpSolution, sdp_solve, trace_out_a
from smooth_entropy.types import SdpStatus

logger = logging.getLogger(__name__)

SLACK_TOL = 1e-7
GAP_TOL = 1e-6


class CertificateReport(BaseModel):
    """Independent replay of an SDP solution against the operator inequality."""
    lam: float = Field(..., description="lambda = -log2 of the claimed optimum, in bits")
    slack: float = Field(..., description="min eigenvalue of 2^-lambda 1 (x) sigma_B - rho_AB")
    gap: float = Field(..., description="Claimed optimum minus the dual objective Tr rho Y")
    dual_residual: float = Field(..., description="|| Tr_A Y - 1_B ||_F")
    dual_min_eig: float = Field(..., description="min eigenvalue of the dual certificate Y")
    status: SdpStatus
    passed: bool


def hmin_conditional(
    rho: MultipartiteState,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
) -> Tuple[float, SdpSolution]:
    """H_min(A|B) = -log2 min { Tr sigma_B : 1_A (x) sigma_B >= rho_AB }.

    Accepts subnormalized states. The second return value is the solver
    witness; check `witness.reliable` before trusting the value.
    """
    if rho.trace <= 0.0:
        raise StateValidationError("H_min(A|B) of a zero-trace operator is undefined")
    solution = sdp_solve(SdpProblem.from_state(rho), tol=tol, max_iter=max_iter)
    value = solution.lam
    if not solution.reliable:
        logger.warning(f"hmin_conditional value {value:.12g} is unreliable (status {solution.status.value})")
    return value, solution


def verify_certificate(rho: MultipartiteState, sol: SdpSolution) -> CertificateReport:
    """Recompute slack and duality gap of `sol` from scratch."""
    d_a, d_b = rho.dims
    lam = -math.log2(sol.optimal_value) if sol.optimal_value > 0.0 else math.inf
    sigma = sol.normalized_sigma
    bound = 2.0 ** (-lam) * np.kron(np.eye(d_a), sigma) - rho.matrix
    slack = float(scipy.linalg.eigvalsh(0.5 * (bound + bound.conj().T))[0])

    y = 0.5 * (sol.dual_certificate + sol.dual_certificate.conj().T)
    dual_value = float(np.real(np.trace(rho.matrix @ y)))
    gap = sol.optimal_value - dual_value
    dual_residual = float(np.linalg.norm(trace_out_a(y, d_a, d_b) - np.eye(d_b)))
    dual_min_eig = float(scipy.linalg.eigvalsh(y)[0])

    passed = (
        slack >= -SLACK_TOL
        and abs(gap) <= GAP_TOL
        and dual_residual <= GAP_TOL
        and dual_min_eig >= -SLACK_TOL
    )
    if not passed:
        logger.info(f"Certificate rejected: slack={slack:.3e} gap={gap:.3e} dual_residual={dual_residual:.3e}")
    return CertificateReport(
        lam=lam,
        slack=slack,
        gap=gap,
        dual_residual=dual_residual,
        dual_min_eig=dual_min_eig,
        status=sol.status,
        passed=passed,
    )
