"""
Tests for the conditional min-entropy SDP and its certificate check.
"""

import dataclasses
import math

import numpy as np
import pytest

from smooth_entropy.entropies import conditional_vn
from smooth_entropy.exceptions import DimensionError, StateValidationError
from smooth_entropy.linalg import (
    apply_unitary,
    diagonal_state,
    group_subsystems,
    maximally_mixed,
    partial_trace,
    random_density,
    random_unitary,
    tensor,
)
from smooth_entropy.minentropy import (
    SdpProblem,
    hermitian_basis,
    hmin_conditional,
    sdp_solve,
    verify_certificate,
)
from smooth_entropy.types import SdpStatus

SDP_TOL = 1e-6


@pytest.mark.unit
class TestKnownValues:
    """States whose conditional min-entropy is known in closed form."""

    def test_maximally_mixed(self, mixed4):
        value, solution = hmin_conditional(mixed4)
        assert value == pytest.approx(1.0, abs=SDP_TOL)
        assert solution.status == SdpStatus.OPTIMAL
        assert solution.reliable

    def test_maximally_entangled(self, bell):
        value, _ = hmin_conditional(bell)
        assert value == pytest.approx(-1.0, abs=SDP_TOL)

    def test_classically_correlated(self):
        rho = diagonal_state([0.5, 0.0, 0.0, 0.5], dims=(2, 2))
        value, _ = hmin_conditional(rho)
        assert value == pytest.approx(0.0, abs=SDP_TOL)

    @pytest.mark.parametrize("seed", range(6))
    @pytest.mark.parametrize("d_a,d_b", [(2, 2), (3, 2), (2, 3)])
    def test_classical_states_match_column_maxima(self, seed, d_a, d_b):
        p = np.random.default_rng(seed).dirichlet(np.ones(d_a * d_b)).reshape(d_a, d_b)
        rho = diagonal_state(p.reshape(-1), dims=(d_a, d_b))
        value, solution = hmin_conditional(rho)
        assert value == pytest.approx(-math.log2(np.sum(np.max(p, axis=0))), abs=SDP_TOL)
        np.testing.assert_allclose(np.real(np.diag(solution.sigma_b)), np.max(p, axis=0), atol=1e-4)

    @pytest.mark.parametrize("seed", range(10))
    def test_product_states(self, seed):
        rho_a = random_density((2,), seed=seed)
        rho_b = random_density((3,), seed=seed + 1000)
        value, _ = hmin_conditional(tensor(rho_a, rho_b))
        assert value == pytest.approx(-math.log2(rho_a.state.eigenvalues[0]), abs=SDP_TOL)

    def test_trivial_conditioning_system(self):
        rho = random_density((3, 1), seed=2)
        value, _ = hmin_conditional(rho)
        assert value == pytest.approx(-math.log2(rho.state.eigenvalues[0]), abs=SDP_TOL)

    def test_trivial_conditioned_system(self):
        rho = random_density((1, 3), seed=3)
        value, _ = hmin_conditional(rho)
        assert value == pytest.approx(0.0, abs=SDP_TOL)

    def test_subnormalized_shift(self):
        rho = random_density((2, 2), seed=5)
        c = 0.5
        base, _ = hmin_conditional(rho)
        scaled, _ = hmin_conditional(rho.scaled(c))
        assert scaled == pytest.approx(base - math.log2(c), abs=SDP_TOL)


@pytest.mark.unit
class TestBounds:
    """Inequalities every solution must respect."""

    @pytest.mark.parametrize("seed", range(8))
    def test_between_minus_log_da_and_log_da(self, seed):
        rho = random_density((2, 2), seed=seed)
        value, _ = hmin_conditional(rho)
        assert -1.0 - SDP_TOL <= value <= 1.0 + SDP_TOL

    @pytest.mark.parametrize("seed", range(8))
    def test_below_conditional_von_neumann(self, seed):
        rho = random_density((2, 2), seed=seed)
        value, _ = hmin_conditional(rho)
        assert value <= conditional_vn(rho).value + SDP_TOL

    def test_invariant_under_local_unitaries(self):
        rho = random_density((2, 2), seed=17)
        u = np.kron(random_unitary(2, seed=1), random_unitary(2, seed=2))
        before, _ = hmin_conditional(rho)
        after, _ = hmin_conditional(apply_unitary(rho, u))
        assert after == pytest.approx(before, abs=SDP_TOL)

    def test_conditioning_on_more_does_not_increase(self, random_222):
        h_abc, _ = hmin_conditional(group_subsystems(random_222, [[0], [1, 2]]))
        h_ab, _ = hmin_conditional(partial_trace(random_222, [0, 1]))
        assert h_abc <= h_ab + SDP_TOL


@pytest.mark.unit
class TestCertificate:
    """Independent replay of the primal and dual witnesses."""

    @pytest.mark.parametrize("seed", range(5))
    def test_certificate_passes(self, seed):
        rho = random_density((2, 3), seed=seed)
        _, solution = hmin_conditional(rho)
        report = verify_certificate(rho, solution)
        assert report.passed
        assert report.slack >= -1e-7
        assert abs(report.gap) <= 1e-6

    def test_sigma_has_optimal_trace(self, mixed4):
        _, solution = hmin_conditional(mixed4)
        assert np.real(np.trace(solution.sigma_b)) == pytest.approx(solution.optimal_value, abs=1e-9)
        assert np.real(np.trace(solution.normalized_sigma)) == pytest.approx(1.0, abs=1e-12)

    def test_dual_certificate_is_feasible(self, bell):
        _, solution = hmin_conditional(bell)
        y = solution.dual_certificate
        d_a, d_b = bell.dims
        tr_a = np.einsum("ikil->kl", y.reshape(d_a, d_b, d_a, d_b))
        np.testing.assert_allclose(tr_a, np.eye(d_b), atol=1e-8)

    def test_halved_sigma_eigenvalue_rejected(self, mixed4):
        _, solution = hmin_conditional(mixed4)
        w, v = np.linalg.eigh(solution.sigma_b)
        w[0] /= 2.0
        doctored = dataclasses.replace(solution, sigma_b=(v * w) @ v.conj().T)
        report = verify_certificate(mixed4, doctored)
        assert not report.passed
        # normalized sigma becomes diag(1/3, 2/3); 1/2 * 1/3 - 1/4 = -1/12
        assert report.slack == pytest.approx(-1.0 / 12.0, abs=1e-6)

    def test_inflated_lambda_rejected_on_known_state(self, mixed4):
        _, solution = hmin_conditional(mixed4)
        doctored = dataclasses.replace(solution, optimal_value=solution.optimal_value * 2.0 ** -0.1)
        report = verify_certificate(mixed4, doctored)
        assert not report.passed
        assert report.lam == pytest.approx(1.1, abs=1e-6)
        assert report.slack == pytest.approx(0.25 * (2.0 ** -0.1 - 1.0), abs=1e-6)
        assert report.gap == pytest.approx(0.5 * (2.0 ** -0.1 - 1.0), abs=1e-6)

    @pytest.mark.parametrize("seed", range(3))
    def test_inflated_lambda_rejected(self, seed):
        rho = random_density((2, 3), seed=seed)
        _, solution = hmin_conditional(rho)
        doctored = dataclasses.replace(solution, optimal_value=solution.optimal_value * 2.0 ** -0.1)
        report = verify_certificate(rho, doctored)
        assert not report.passed
        assert report.lam == pytest.approx(solution.lam + 0.1, abs=1e-9)
        margin = (1.0 - 2.0 ** -0.1) * solution.optimal_value * np.linalg.eigvalsh(solution.normalized_sigma)[0]
        assert report.slack <= -margin + 1e-6
        assert report.gap == pytest.approx(solution.optimal_value * (2.0 ** -0.1 - 1.0), abs=1e-6)

    def test_solver_is_deterministic(self):
        rho = random_density((2, 2), seed=31)
        first = sdp_solve(SdpProblem.from_state(rho))
        second = sdp_solve(SdpProblem.from_state(rho))
        assert first.optimal_value == second.optimal_value
        assert first.iterations == second.iterations


@pytest.mark.unit
class TestValidation:
    """Input errors."""

    def test_tripartite_rejected(self, random_222):
        with pytest.raises(DimensionError):
            hmin_conditional(random_222)

    def test_zero_state_rejected(self):
        rho = diagonal_state([0.0, 0.0, 0.0, 0.0], dims=(2, 2))
        with pytest.raises(StateValidationError):
            hmin_conditional(rho)

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            SdpProblem(rho_ab=np.eye(4) / 4, dims=(2, 3))

    def test_hermitian_basis_is_orthonormal(self):
        basis = hermitian_basis(3)
        assert basis.shape[0] == 9
        gram = np.einsum("aij,bij->ab", basis.conj(), basis).real
        np.testing.assert_allclose(gram, np.eye(9), atol=1e-12)


@pytest.mark.slow
class TestAgainstCvxpy:
    """Cross-check against a general-purpose conic solver, when installed."""

    @pytest.mark.parametrize("seed", range(3))
    def test_matches_cvxpy(self, seed):
        cp = pytest.importorskip("cvxpy")
        rho = random_density((2, 2), seed=seed)
        d_a, d_b = rho.dims
        sigma = cp.Variable((d_b, d_b), hermitian=True)
        problem = cp.Problem(
            cp.Minimize(cp.real(cp.trace(sigma))),
            [cp.kron(np.eye(d_a), sigma) - rho.matrix >> 0],
        )
        problem.solve()
        value, _ = hmin_conditional(rho)
        assert value == pytest.approx(-math.log2(problem.value), abs=1e-4)


@pytest.mark.unit
def test_maximally_mixed_larger_split():
    value, _ = hmin_conditional(maximally_mixed((3, 2)))
    assert value == pytest.approx(math.log2(3), abs=SDP_TOL)
