"""
Dense primal-dual interior-point solver for the conditional min-entropy SDP.

    primal:  min Tr sigma       s.t.  1_A (x) sigma - rho >= 0
    dual:    max Tr rho Y       s.t.  Tr_A Y = 1_B,  Y >= 0

sigma is parametrized by its coordinates y in an orthonormal Hermitian basis
{E_k} of d_B x d_B matrices, so the primal is an SDP in standard inequality
form with A_k = 1_A (x) E_k, b_k = Tr E_k and C = rho. The iteration is
Mehrotra-style predictor-corrector path following with the Nesterov-Todd
scaling W (W Z W = Y).
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.linalg

from smooth_entropy.config import config
from smooth_entropy.exceptions import DimensionError, ParameterRangeError, StateValidationError
from smooth_entropy.linalg.core import hermitize
from smooth_entropy.linalg.operators import MultipartiteState, as_complex_matrix
from smooth_entropy.types import SdpStatus

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SdpProblem:
    """min Tr sigma_B subject to 1_A (x) sigma_B >= rho_AB."""
    rho_ab: np.ndarray
    dims: Tuple[int, int]

    def __post_init__(self):
        rho = as_complex_matrix(self.rho_ab, "rho_ab")
        d_a, d_b = (int(d) for d in self.dims)
        if d_a < 1 or d_b < 1 or rho.shape != (d_a * d_b, d_a * d_b):
            raise DimensionError(f"rho_ab of shape {rho.shape} does not match dims ({d_a}, {d_b})")
        if d_b > config.sdp_max_dim_b:
            raise DimensionError(f"Conditioning dimension {d_b} exceeds sdp_max_dim_b={config.sdp_max_dim_b}")
        if float(np.max(np.abs(rho - rho.conj().T))) > config.herm_tol:
            raise StateValidationError("rho_ab is not Hermitian")
        rho = hermitize(rho)
        if float(scipy.linalg.eigvalsh(rho)[0]) < -config.herm_tol:
            raise StateValidationError("rho_ab is not PSD")
        rho.setflags(write=False)
        object.__setattr__(self, "rho_ab", rho)
        object.__setattr__(self, "dims", (d_a, d_b))

    @classmethod
    def from_state(cls, rho: MultipartiteState) -> "SdpProblem":
        if rho.n_subsystems != 2:
            raise DimensionError(f"The min-entropy SDP needs a bipartite state, got dims {rho.dims}")
        return cls(rho_ab=rho.matrix, dims=rho.dims)


@dataclass(frozen=True)
class SdpSolution:
    optimal_value: float
    sigma_b: np.ndarray
    dual_certificate: np.ndarray
    gap: float
    iterations: int
    status: SdpStatus
    primal_residual: float
    dual_residual: float

    @property
    def lam(self) -> float:
        """lambda = -log2 Tr sigma*, the min-entropy in bits."""
        return -math.log2(self.optimal_value)

    @property
    def normalized_sigma(self) -> np.ndarray:
        return self.sigma_b / np.real(np.trace(self.sigma_b))

    @property
    def reliable(self) -> bool:
        return self.status == SdpStatus.OPTIMAL


def hermitian_basis(d: int) -> np.ndarray:
    """Frobenius-orthonormal basis of d x d Hermitian matrices, shape (d*d, d, d).

    Diagonal units come first, so b_k = Tr E_k is 1 for k < d and 0 after.
    """
    basis = []
    for j in range(d):
        e = np.zeros((d, d), dtype=np.complex128)
        e[j, j] = 1.0
        basis.append(e)
    s = 1.0 / math.sqrt(2.0)
    for j in range(d):
        for k in range(j + 1, d):
            re = np.zeros((d, d), dtype=np.complex128)
            re[j, k] = re[k, j] = s
            im = np.zeros((d, d), dtype=np.complex128)
            im[j, k] = -1j * s
            im[k, j] = 1j * s
            basis.extend([re, im])
    return np.array(basis)


def trace_out_a(m: np.ndarray, d_a: int, d_b: int) -> np.ndarray:
    return np.einsum("ajak->jk", m.reshape(d_a, d_b, d_a, d_b))


class InteriorPointSolver:
    """Predictor-corrector path following for one SdpProblem.

    Instances are single-use and hold no state shared with other solves.
    """

    def __init__(
        self,
        problem: SdpProblem,
        tol: Optional[float] = None,
        max_iter: Optional[int] = None,
        step_fraction: float = 0.95,
    ):
        self.problem = problem
        self.tol = config.sdp_tol if tol is None else tol
        self.max_iter = config.sdp_max_iter if max_iter is None else max_iter
        if self.tol <= 0.0:
            raise ParameterRangeError(f"SDP tolerance must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ParameterRangeError(f"max_iter must be >= 1, got {self.max_iter}")
        self.step_fraction = step_fraction

        d_a, d_b = problem.dims
        self.d_a, self.d_b = d_a, d_b
        self.n = d_a * d_b
        self.basis = hermitian_basis(d_b)
        self.A = np.array([np.kron(np.eye(d_a), e) for e in self.basis])
        self.b = np.real(np.einsum("kaa->k", self.basis))

        # Work on rho / Tr rho so tolerances are relative; rescaled on exit
        trace = float(np.real(np.trace(problem.rho_ab)))
        self.scale = trace if trace > config.zero_eig else 1.0
        self.C = problem.rho_ab / self.scale

    # --- linear maps ---

    def _op(self, x: np.ndarray) -> np.ndarray:
        """A(X)_k = Re Tr(A_k X)."""
        return np.real(np.einsum("kab,ba->k", self.A, x))

    def _adj(self, y: np.ndarray) -> np.ndarray:
        """A*(y) = sum_k y_k A_k."""
        return np.einsum("k,kab->ab", y, self.A)

    def _sigma(self, y: np.ndarray) -> np.ndarray:
        return hermitize(np.einsum("k,kab->ab", y, self.basis))

    # --- helpers ---

    @staticmethod
    def _max_step(chol: np.ndarray, direction: np.ndarray) -> float:
        """Largest t with L L^dag + t D >= 0."""
        inv = scipy.linalg.solve_triangular(chol, np.eye(chol.shape[0]), lower=True)
        lam_min = float(scipy.linalg.eigvalsh(hermitize(inv @ direction @ inv.conj().T))[0])
        return math.inf if lam_min >= 0.0 else -1.0 / lam_min

    def _nt_scaling(self, lx: np.ndarray, lz: np.ndarray) -> np.ndarray:
        """W with W Z W = X from the Cholesky factors of X and Z."""
        _, s, vh = scipy.linalg.svd(lz.conj().T @ lx)
        v = vh.conj().T
        g = lx @ v / np.sqrt(s)[np.newaxis, :]
        return hermitize(g @ g.conj().T)

    def _direction(self, x, z, w, z_inv, schur, rp, rd, mu):
        rhs = self._op(mu * z_inv - x + w @ rd @ w) - rp
        dy = self._solve_schur(schur, rhs)
        dz = hermitize(self._adj(dy) - rd)
        dx = hermitize(mu * z_inv - x - w @ dz @ w)
        return dx, dy, dz

    @staticmethod
    def _solve_schur(schur: np.ndarray, rhs: np.ndarray) -> np.ndarray:
        try:
            return scipy.linalg.cho_solve(scipy.linalg.cho_factor(schur), rhs)
        except np.linalg.LinAlgError:
            return np.linalg.solve(schur, rhs)

    def _initial_point(self):
        lam_max = float(scipy.linalg.eigvalsh(self.C)[-1])
        lam_max = lam_max if lam_max > config.zero_eig else 1.0
        level = lam_max * self.d_a
        z_min = float(scipy.linalg.eigvalsh(level * np.eye(self.n) - self.C)[0])
        if z_min < lam_max:
            # 1_A (x) (||rho|| d_A) 1_B - rho is singular when d_A = 1
            level += lam_max - z_min
        y = np.concatenate([np.full(self.d_b, level), np.zeros(self.d_b * self.d_b - self.d_b)])
        z = hermitize(self._adj(y) - self.C)
        x = np.eye(self.n, dtype=np.complex128) / self.d_a
        return x, y, z

    # --- main loop ---

    def solve(self) -> SdpSolution:
        x, y, z = self._initial_point()
        status = SdpStatus.MAX_ITER
        iterations = 0
        gamma = self.step_fraction

        for iterations in range(1, self.max_iter + 1):
            rp = self.b - self._op(x)
            rd = hermitize(self.C + z - self._adj(y))
            gap = float(np.real(np.trace(x @ z)))
            pobj = float(self.b @ y)
            mu = gap / self.n

            logger.debug(
                f"iter {iterations}: pobj={pobj:.12g} gap={gap:.3e} "
                f"|rp|={np.linalg.norm(rp):.1e} |rd|={np.linalg.norm(rd):.1e}"
            )
            if (
                gap <= self.tol * max(1.0, abs(pobj))
                and np.linalg.norm(rp) <= self.tol * (1.0 + np.linalg.norm(self.b))
                and np.linalg.norm(rd) <= self.tol * (1.0 + np.linalg.norm(self.C))
            ):
                status = SdpStatus.OPTIMAL
                break

            try:
                lx = np.linalg.cholesky(x)
                lz = np.linalg.cholesky(z)
                w = self._nt_scaling(lx, lz)
                lz_inv = scipy.linalg.solve_triangular(lz, np.eye(self.n), lower=True)
                z_inv = hermitize(lz_inv.conj().T @ lz_inv)
                wa = w[np.newaxis, :, :] @ self.A @ w[np.newaxis, :, :]
                schur = np.real(np.einsum("iab,jba->ij", self.A, wa))
                schur = 0.5 * (schur + schur.T)

                # Predictor: pure Newton step towards mu = 0
                dx, dy, dz = self._direction(x, z, w, z_inv, schur, rp, rd, 0.0)
                ap = min(1.0, self._max_step(lx, dx))
                ad = min(1.0, self._max_step(lz, dz))
                gap_aff = float(np.real(np.trace((x + ap * dx) @ (z + ad * dz))))
                centering = min(1.0, max(gap_aff / gap, 0.0) ** 3) if gap > 0.0 else 0.0

                # Corrector: recentred direction
                dx, dy, dz = self._direction(x, z, w, z_inv, schur, rp, rd, centering * mu)
                ap = min(1.0, gamma * self._max_step(lx, dx))
                ad = min(1.0, gamma * self._max_step(lz, dz))
            except (np.linalg.LinAlgError, ValueError) as e:
                logger.debug(f"iter {iterations}: numerical failure ({e})")
                status = self._stalled_status(gap, pobj)
                break

            if ap < 1e-12 and ad < 1e-12:
                status = self._stalled_status(gap, pobj)
                break

            x = hermitize(x + ap * dx)
            y = y + ad * dy
            z = hermitize(z + ad * dz)

        if status != SdpStatus.OPTIMAL:
            logger.warning(f"SDP terminated with status {status.value} after {iterations} iterations")
        return self._finalize(x, y, iterations, status)

    def _stalled_status(self, gap: float, pobj: float) -> SdpStatus:
        if gap <= 1e-8 * max(1.0, abs(pobj)):
            return SdpStatus.OPTIMAL
        return SdpStatus.INFEASIBLE_NUMERICS

    def _finalize(self, x, y, iterations, status) -> SdpSolution:
        # Shift sigma so the operator inequality holds exactly
        sigma = self._sigma(y)
        slack = float(scipy.linalg.eigvalsh(np.kron(np.eye(self.d_a), sigma) - self.C)[0])
        if slack < 0.0:
            sigma = sigma + (-slack) * np.eye(self.d_b)

        # Congruence by 1 (x) R^{-1/2} restores Tr_A Y = 1 exactly and keeps Y >= 0
        reduced = hermitize(trace_out_a(x, self.d_a, self.d_b))
        vals, vecs = scipy.linalg.eigh(reduced)
        if vals[0] > 0.0:
            r_inv_sqrt = (vecs / np.sqrt(vals)[np.newaxis, :]) @ vecs.conj().T
            k = np.kron(np.eye(self.d_a), r_inv_sqrt)
            x = hermitize(k @ x @ k.conj().T)

        sigma = sigma * self.scale
        value = float(np.real(np.trace(sigma)))
        dual_value = float(np.real(np.trace(self.problem.rho_ab @ x)))
        primal_residual = max(
            0.0,
            -float(scipy.linalg.eigvalsh(np.kron(np.eye(self.d_a), sigma) - self.problem.rho_ab)[0]),
        )
        dual_residual = float(np.linalg.norm(trace_out_a(x, self.d_a, self.d_b) - np.eye(self.d_b)))
        return SdpSolution(
            optimal_value=value,
            sigma_b=sigma,
            dual_certificate=x,
            gap=value - dual_value,
            iterations=iterations,
            status=status,
            primal_residual=primal_residual,
            dual_residual=dual_residual,
        )


def sdp_solve(
    p: SdpProblem,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
) -> SdpSolution:
    """Solve `p`; deterministic given its inputs."""
    return InteriorPointSolver(p, tol=tol, max_iter=max_iter).solve()
