"""
Tests for spectra, spectral truncation, the single-copy smooth entropies and
the grid oracle.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smooth_entropy.exceptions import DimensionError, ParameterRangeError, StateValidationError
from smooth_entropy.linalg import diagonal_state, random_density, random_spectrum
from smooth_entropy.metrics import generalized_fidelity
from smooth_entropy.smoothing import (
    Spectrum,
    brute_force_smooth,
    h0_target,
    hmin_target,
    smooth_h0,
    smooth_h0_truncation,
    smooth_hmin_truncation,
    smooth_hmin_unconditional,
    truncate_spectrum,
    truncate_values,
    truncated_state,
)
from smooth_entropy.types import SmoothMeasure, TruncationDirection


@pytest.mark.unit
class TestSpectrum:
    """Canonical (value, multiplicity) spectra."""

    def test_equal_values_merge(self):
        s = Spectrum.from_values([0.25, 0.5, 0.25])
        assert s.entries == ((0.5, 1), (0.25, 2))
        assert s.dim == 3
        assert s.distinct == 2

    def test_near_equal_values_merge(self):
        s = Spectrum.from_values([0.5, 0.5 * (1 + 1e-14)])
        assert s.distinct == 1

    def test_noise_clamped_to_zero(self):
        s = Spectrum.from_values([1.0, 1e-16, -1e-15])
        assert s.entries == ((1.0, 1), (0.0, 2))
        assert s.rank == 1

    def test_values_expand_multiplicities(self):
        s = Spectrum.from_values([0.4, 0.3, 0.3])
        np.testing.assert_array_equal(s.values(), [0.4, 0.3, 0.3])

    def test_from_state(self, qubit_75):
        s = Spectrum.from_state(qubit_75)
        assert s.distinct == 2
        np.testing.assert_allclose(s.values(), [0.75, 0.25], atol=1e-15)

    def test_overweight_rejected(self):
        with pytest.raises(StateValidationError):
            Spectrum.from_values([0.8, 0.8])

    def test_negative_rejected(self):
        with pytest.raises(StateValidationError):
            Spectrum.from_values([1.1, -0.1])

    def test_unsorted_direct_construction_rejected(self):
        with pytest.raises(StateValidationError):
            Spectrum(entries=((0.25, 1), (0.75, 1)))

    def test_empty_rejected(self):
        with pytest.raises(StateValidationError):
            Spectrum.from_values([])


@pytest.mark.unit
class TestTruncation:
    """Removing weight from the top or the bottom of a spectrum."""

    def test_cut_large_fractional(self):
        result = truncate_spectrum([0.75, 0.25], 0.8, TruncationDirection.CUT_LARGE)
        np.testing.assert_allclose(result.smoothed.values(), [0.55, 0.25], atol=1e-15)
        assert result.lambda_star == 0.75
        assert result.fractional_cut == pytest.approx(0.2 / 0.75)
        assert result.achieved_fidelity == pytest.approx(0.8, abs=1e-15)

    def test_cut_large_removes_whole_eigenvalues(self):
        result = truncate_spectrum([0.5, 0.3, 0.2], 0.4, TruncationDirection.CUT_LARGE)
        np.testing.assert_allclose(np.sort(result.smoothed.values())[::-1], [0.2, 0.2, 0.0], atol=1e-15)
        assert result.lambda_star == 0.3

    def test_cut_small_removes_tail(self):
        result = truncate_spectrum([0.5, 0.3, 0.2], 0.8, TruncationDirection.CUT_SMALL)
        assert result.smoothed.rank == 2
        assert result.fractional_cut == 0.0
        assert result.achieved_fidelity == pytest.approx(0.8, abs=1e-15)

    def test_full_target_is_identity(self):
        result = truncate_spectrum([0.6, 0.4], 1.0)
        assert result.smoothed.entries == ((0.6, 1), (0.4, 1))
        assert result.fractional_cut == 0.0

    def test_target_above_weight_rejected(self):
        with pytest.raises(ParameterRangeError):
            truncate_spectrum([0.5, 0.3], 0.9)

    def test_non_positive_target_rejected(self):
        with pytest.raises(ParameterRangeError):
            truncate_spectrum([0.5, 0.5], 0.0)

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=10_000), eps=st.floats(min_value=0.0, max_value=0.9))
    def test_truncation_stays_in_ball(self, seed, eps):
        values = random_spectrum(4, seed=seed)
        result = smooth_hmin_truncation(values, eps)
        nu, _, _ = truncate_values(values, hmin_target(eps), TruncationDirection.CUT_LARGE)
        # Co-diagonal with nu <= lambda, so the generalized fidelity is at least the retained weight
        assert generalized_fidelity(diagonal_state(values), diagonal_state(nu)).value >= result.achieved_fidelity - 1e-9
        assert result.achieved_fidelity == pytest.approx(hmin_target(eps), abs=1e-12)

    def test_truncated_state_keeps_eigenbasis(self):
        rho = random_density((2, 2), seed=3)
        target = hmin_target(0.2)
        smoothed = truncated_state(rho, target)
        assert smoothed.trace == pytest.approx(target, abs=1e-12)
        # Commutes with rho
        np.testing.assert_allclose(smoothed.matrix @ rho.matrix, rho.matrix @ smoothed.matrix, atol=1e-12)

    def test_truncated_state_target_range(self):
        rho = random_density((2,), seed=1)
        with pytest.raises(ParameterRangeError):
            truncated_state(rho, 1.5)


@pytest.mark.unit
class TestSmoothEntropies:
    """Single-copy smooth min-entropy and smooth H_0."""

    def test_reference_value(self, qubit_75):
        assert smooth_hmin_unconditional(qubit_75, 0.6) == pytest.approx(0.862496476, abs=1e-9)

    def test_zero_epsilon_is_unsmoothed(self, qubit_75):
        assert smooth_hmin_unconditional(qubit_75, 0.0) == pytest.approx(-math.log2(0.75), abs=1e-12)
        assert smooth_h0(qubit_75, 0.0) == pytest.approx(1.0, abs=1e-12)

    def test_h0_drops_small_eigenvalue(self, qubit_75):
        assert smooth_h0(qubit_75, 0.6) == 0.0

    def test_fractional_cut_keeps_rank(self, qubit_75):
        assert smooth_h0(qubit_75, 0.05) == pytest.approx(1.0)

    def test_ball_certified_target(self):
        assert h0_target(0.1) == pytest.approx(math.sqrt(0.9))
        assert h0_target(0.1, ball_certified=True) == pytest.approx(math.sqrt(0.99))
        result = smooth_h0_truncation([0.5, 0.3, 0.2], 0.1, ball_certified=True)
        assert result.achieved_fidelity == pytest.approx(math.sqrt(0.99), abs=1e-12)

    def test_accepts_spectrum_and_state(self, qubit_75):
        assert smooth_hmin_unconditional([0.75, 0.25], 0.3) == pytest.approx(smooth_hmin_unconditional(qubit_75, 0.3), abs=1e-12)

    def test_maximally_mixed_is_flat(self):
        # Every eigenvalue equals the maximum, so a partial cut leaves the max intact
        assert smooth_hmin_unconditional([0.25] * 4, 0.05) == pytest.approx(2.0, abs=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=10_000), eps=st.floats(min_value=0.0, max_value=0.9))
    def test_monotone_in_epsilon(self, seed, eps):
        values = random_spectrum(3, seed=seed)
        assert smooth_hmin_unconditional(values, eps) >= smooth_hmin_unconditional(values, 0.0) - 1e-12
        assert smooth_h0(values, eps) <= smooth_h0(values, 0.0) + 1e-12

    def test_subnormalized_input_rejected(self):
        with pytest.raises(StateValidationError):
            smooth_hmin_unconditional([0.5, 0.2], 0.1)

    @pytest.mark.parametrize("eps", [-0.1, 1.0, 1.5])
    def test_epsilon_range(self, qubit_75, eps):
        with pytest.raises(ParameterRangeError):
            smooth_hmin_unconditional(qubit_75, eps)


@pytest.mark.unit
class TestBruteForce:
    """Grid optimum over co-diagonal smoothings."""

    def test_construction_is_a_lower_bound_for_hmin(self, qubit_75):
        brute = brute_force_smooth(qubit_75, 0.6, SmoothMeasure.HMIN)
        assert brute >= smooth_hmin_unconditional(qubit_75, 0.6)

    def test_construction_matches_h0(self, qubit_75):
        for eps in (0.05, 0.6):
            assert brute_force_smooth(qubit_75, eps, SmoothMeasure.H0) == smooth_h0(qubit_75, eps)

    def test_zero_epsilon_close_to_unsmoothed(self, qubit_75):
        # The grid slack lets caps somewhat below 0.75 through
        brute = brute_force_smooth(qubit_75, 0.0, SmoothMeasure.HMIN)
        assert -math.log2(0.75) - 1e-12 <= brute <= -math.log2(0.75) + 0.1

    def test_dimension_cap(self):
        with pytest.raises(DimensionError):
            brute_force_smooth([0.2] * 5, 0.1, SmoothMeasure.HMIN)

    def test_grid_floor(self, qubit_75):
        with pytest.raises(ParameterRangeError):
            brute_force_smooth(qubit_75, 0.1, SmoothMeasure.HMIN, grid=10)

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(20))
    def test_oracle_agreement_on_random_spectra(self, seed):
        values = random_spectrum(3, seed=seed)
        for eps in (0.1, 0.3):
            assert brute_force_smooth(values, eps, SmoothMeasure.H0) <= smooth_h0(values, eps) + 1e-12
