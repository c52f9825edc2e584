"""
Tests for state containers, partial traces, subsystem regrouping and the
state JSON format.
"""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from smooth_entropy.exceptions import ConfigError, DimensionError, ParameterRangeError, StateValidationError
from smooth_entropy.linalg import (
    DensityOperator,
    MultipartiteState,
    PureState,
    apply_projection,
    apply_unitary,
    derive_seed,
    diagonal_state,
    eig_hermitian,
    group_subsystems,
    hermitize,
    matrix_function,
    matrix_sqrt,
    partial_trace,
    permute_subsystems,
    purify,
    random_density,
    random_spectrum,
    random_unitary,
    StateFile,
    read_state,
    state_from_dict,
    state_to_json,
    support_projector,
    support_rank,
    tensor,
    tensor_power,
    write_state,
)
from smooth_entropy.types import TraceClass


@pytest.mark.unit
class TestDensityOperator:
    """Validation of Hermiticity, positivity and trace."""

    def test_normalized_state_is_classified(self, bell):
        assert bell.state.trace_class == TraceClass.NORMALIZED
        assert bell.state.is_normalized

    def test_subnormalized_state_is_classified(self):
        rho = DensityOperator.from_matrix(np.diag([0.4, 0.3]))
        assert rho.trace_class == TraceClass.SUBNORMALIZED
        assert rho.trace == pytest.approx(0.7)

    def test_non_hermitian_rejected(self):
        with pytest.raises(StateValidationError, match="Hermitian"):
            DensityOperator.from_matrix([[0.5, 0.1], [0.0, 0.5]])

    def test_negative_eigenvalue_rejected(self):
        with pytest.raises(StateValidationError, match="PSD"):
            DensityOperator.from_matrix(np.diag([1.2, -0.2]))

    def test_trace_above_one_rejected(self):
        with pytest.raises(StateValidationError, match="exceeds 1"):
            DensityOperator.from_matrix(np.diag([0.8, 0.8]))

    def test_nan_rejected(self):
        with pytest.raises(StateValidationError, match="NaN"):
            DensityOperator.from_matrix([[np.nan, 0.0], [0.0, 1.0]])

    def test_forced_normalized_class_checked(self):
        with pytest.raises(StateValidationError):
            DensityOperator.from_matrix(np.diag([0.5, 0.2]), trace_class=TraceClass.NORMALIZED)

    def test_matrix_is_read_only(self, bell):
        with pytest.raises(ValueError):
            bell.matrix[0, 0] = 1.0

    def test_dims_must_match_matrix(self):
        with pytest.raises(DimensionError):
            MultipartiteState.from_matrix(np.eye(4) / 4, dims=(2, 3))


@pytest.mark.unit
class TestPartialTrace:
    """Reduced states and subsystem bookkeeping."""

    def test_bell_marginals_are_maximally_mixed(self, bell):
        for keep in ([0], [1]):
            reduced = partial_trace(bell, keep)
            assert reduced.dims == (2,)
            np.testing.assert_allclose(reduced.matrix, np.eye(2) / 2, atol=1e-12)

    def test_product_marginals(self, product_state):
        np.testing.assert_allclose(partial_trace(product_state, [0]).matrix, np.diag([0.7, 0.3]), atol=1e-12)
        np.testing.assert_allclose(partial_trace(product_state, [1]).matrix, np.diag([0.6, 0.4]), atol=1e-12)

    def test_keep_all_is_identity(self, random_222):
        assert partial_trace(random_222, [0, 1, 2]) is random_222

    def test_trace_preserved(self, random_222):
        for keep in ([0], [1, 2], [0, 2]):
            assert partial_trace(random_222, keep).trace == pytest.approx(1.0, abs=1e-12)

    def test_out_of_range_rejected(self, bell):
        with pytest.raises(DimensionError):
            partial_trace(bell, [2])

    def test_empty_keep_rejected(self, bell):
        with pytest.raises(DimensionError):
            partial_trace(bell, [])

    def test_nested_traces_commute(self, random_222):
        direct = partial_trace(random_222, [0])
        nested = partial_trace(partial_trace(random_222, [0, 1]), [0])
        np.testing.assert_allclose(direct.matrix, nested.matrix, atol=1e-12)

    def test_trace_over_last_qubit_by_index_sums(self, random_222):
        m = random_222.matrix
        expected = np.zeros((4, 4), dtype=complex)
        for a in range(2):
            for b in range(2):
                for a2 in range(2):
                    for b2 in range(2):
                        for c in range(2):
                            expected[2 * a + b, 2 * a2 + b2] += m[4 * a + 2 * b + c, 4 * a2 + 2 * b2 + c]
        reduced = partial_trace(random_222, [0, 1])
        assert reduced.dims == (2, 2)
        np.testing.assert_allclose(reduced.matrix, expected, atol=1e-14)


@pytest.mark.unit
class TestGrouping:
    """Regrouping and permuting subsystems."""

    def test_group_merges_dims(self, random_222):
        grouped = group_subsystems(random_222, [[0], [1, 2]])
        assert grouped.dims == (2, 4)
        np.testing.assert_allclose(grouped.matrix, random_222.matrix, atol=0)

    def test_permutation_swaps_product_factors(self, product_state):
        swapped = permute_subsystems(product_state, [1, 0])
        expected = np.kron(np.diag([0.6, 0.4]), np.diag([0.7, 0.3]))
        np.testing.assert_allclose(swapped.matrix, expected, atol=1e-12)

    def test_group_must_partition(self, random_222):
        with pytest.raises(DimensionError):
            group_subsystems(random_222, [[0], [0, 1]])

    def test_tensor_power_dims(self, qubit_75):
        power = tensor_power(qubit_75, 3)
        assert power.dims == (2, 2, 2)
        assert power.matrix[0, 0].real == pytest.approx(0.75 ** 3)

    def test_tensor_concatenates_dims(self, bell, qubit_75):
        assert tensor(bell, qubit_75).dims == (2, 2, 2)


@pytest.mark.unit
class TestSpectralHelpers:
    """Eigen-decomposition, square roots and purification."""

    def test_eigenvalues_non_increasing(self, random_222):
        vals, vecs = eig_hermitian(random_222.matrix)
        assert np.all(np.diff(vals) <= 1e-12)
        np.testing.assert_allclose((vecs * vals) @ vecs.conj().T, random_222.matrix, atol=1e-12)

    def test_eigenvector_phase_convention(self, random_222):
        _, vecs = eig_hermitian(random_222.matrix)
        pivots = np.argmax(np.abs(vecs), axis=0)
        lead = vecs[pivots, np.arange(vecs.shape[1])]
        np.testing.assert_allclose(lead.imag, 0.0, atol=1e-12)
        assert np.all(lead.real > 0)

    def test_matrix_sqrt_squares_back(self, random_222):
        root = matrix_sqrt(random_222.matrix)
        np.testing.assert_allclose(root @ root, random_222.matrix, atol=1e-12)

    def test_hermitize(self):
        m = np.array([[1.0, 2.0j], [0.0, 3.0]])
        np.testing.assert_allclose(hermitize(m), [[1.0, 1.0j], [-1.0j, 3.0]])

    def test_matrix_function_clamps_negative_noise(self):
        m = np.diag([0.5, -1e-15])
        np.testing.assert_allclose(matrix_function(m, np.sqrt), np.diag([math.sqrt(0.5), 0.0]), atol=1e-15)

    def test_projection_reduces_trace(self, mixed4):
        projector = np.diag([1.0, 1.0, 0.0, 0.0])
        projected = apply_projection(mixed4, projector)
        assert projected.trace == pytest.approx(0.5)
        assert projected.dims == (2, 2)

    def test_purification_reduces_to_state(self):
        rho = random_density((3,), rank=2, seed=5)
        psi = purify(rho)
        assert psi.dims == (3, 2)
        reduced = partial_trace(psi.density(), [0])
        np.testing.assert_allclose(reduced.matrix, rho.matrix, atol=1e-10)

    def test_support_projector_drops_tiny_eigenvalues(self):
        rho = diagonal_state([0.999999, 1e-15])
        projector = support_projector(rho, rank_tol=1e-10)
        np.testing.assert_allclose(projector, np.diag([1.0, 0.0]), atol=1e-12)
        np.testing.assert_allclose(projector @ projector, projector, atol=1e-12)

    def test_support_rank(self):
        assert support_rank(diagonal_state([0.5, 0.5, 0.0])) == 2

    def test_unitary_conjugation_preserves_spectrum(self, random_222):
        u = random_unitary(8, seed=3)
        rotated = apply_unitary(random_222, u)
        np.testing.assert_allclose(rotated.state.eigenvalues, random_222.state.eigenvalues, atol=1e-12)

    def test_pure_state_norm_bound(self):
        with pytest.raises(StateValidationError):
            PureState(amplitudes=np.array([1.0, 1.0]), dims=(2,))


@pytest.mark.unit
class TestRandomStates:
    """Seeded Ginibre-induced states."""

    def test_same_seed_same_state(self):
        a = random_density((2, 2), seed=11)
        b = random_density((2, 2), seed=11)
        assert np.array_equal(a.matrix, b.matrix)

    def test_different_seeds_differ(self):
        assert not np.allclose(random_density((2, 2), seed=1).matrix, random_density((2, 2), seed=2).matrix)

    def test_rank_respected(self):
        rho = random_density((4,), rank=2, seed=3)
        assert support_rank(rho) == 2
        assert rho.state.is_normalized

    def test_bad_rank_rejected(self):
        with pytest.raises(ParameterRangeError):
            random_density((2,), rank=3)

    def test_mean_state_is_maximally_mixed(self):
        mean = sum(random_density((2,), rank=2, seed=seed).matrix for seed in range(10_000)) / 10_000
        half_trace_norm = 0.5 * np.sum(np.abs(np.linalg.eigvalsh(mean - np.eye(2) / 2)))
        assert half_trace_norm <= 0.02

    def test_derived_seeds_are_stable_and_distinct(self):
        assert derive_seed(0, 5) == derive_seed(0, 5)
        assert len({derive_seed(0, i) for i in range(100)}) == 100

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2**32), d=st.integers(min_value=1, max_value=6))
    def test_random_spectrum_is_a_distribution(self, seed, d):
        s = random_spectrum(d, seed=seed)
        assert s.shape == (d,)
        assert math.fsum(s) == pytest.approx(1.0, abs=1e-12)
        assert np.all(s >= 0.0)
        assert np.all(np.diff(s) <= 0.0)

    def test_random_unitary_is_unitary(self):
        u = random_unitary(5, seed=9)
        np.testing.assert_allclose(u @ u.conj().T, np.eye(5), atol=1e-12)


@pytest.mark.unit
class TestStateJson:
    """Reading and writing the {dims, re, im} format."""

    def test_written_state_reads_back_identically(self, tmp_path):
        rho = random_density((2, 3), seed=21)
        path = tmp_path / "state.json"
        write_state(rho, path)
        again = read_state(path)
        assert again.dims == rho.dims
        assert np.array_equal(again.matrix, rho.matrix)

    def test_json_fields(self, bell):
        data = json.loads(state_to_json(bell))
        assert set(data) == {"dims", "re", "im"}
        assert data["dims"] == [2, 2]

    def test_missing_field_named(self):
        with pytest.raises(ConfigError, match="'im'"):
            state_from_dict({"dims": [1], "re": [[1.0]]})

    def test_shape_mismatch_named(self):
        with pytest.raises(ConfigError, match="'re'"):
            state_from_dict({"dims": [2], "re": [[1.0]], "im": [[0.0]]})

    def test_bad_dims_named(self):
        with pytest.raises(ConfigError, match="'dims'"):
            state_from_dict({"dims": [0], "re": [], "im": []})

    def test_invalid_state_becomes_config_error(self):
        with pytest.raises(ConfigError):
            state_from_dict({"dims": [2], "re": [[1.5, 0.0], [0.0, -0.5]], "im": [[0.0, 0.0], [0.0, 0.0]]})

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            read_state(tmp_path / "absent.json")

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError, match="not valid JSON"):
            read_state(path)

    def test_wrong_field_in_file_named(self, tmp_path):
        path = tmp_path / "dims.json"
        path.write_text('{"dims": [2, -1], "re": [[1.0]], "im": [[0.0]]}')
        with pytest.raises(ConfigError, match="'dims'"):
            read_state(path)


@pytest.mark.unit
class TestStateFile:
    """The pydantic model behind state files."""

    def test_model_round_trip(self, random_222):
        model = StateFile.from_state(random_222)
        again = StateFile.model_validate_json(model.model_dump_json())
        assert again == model
        assert np.array_equal(again.to_state().matrix, random_222.matrix)

    def test_shape_checked_for_both_parts(self):
        with pytest.raises(ValidationError, match="'im' has shape"):
            StateFile.model_validate({"dims": [2], "re": [[0.5, 0.0], [0.0, 0.5]], "im": [[0.0, 0.0]]})

    def test_ragged_rows_rejected(self):
        with pytest.raises(ValidationError, match="'re' has shape"):
            StateFile.model_validate({"dims": [2], "re": [[0.5, 0.0], [0.5]], "im": [[0.0, 0.0], [0.0, 0.0]]})

    def test_trace_above_one_rejected(self):
        with pytest.raises(ValidationError, match="trace"):
            StateFile.model_validate({"dims": [2], "re": [[0.9, 0.0], [0.0, 0.9]], "im": [[0.0, 0.0], [0.0, 0.0]]})

    def test_non_finite_entries_rejected(self):
        with pytest.raises(ConfigError, match="'re'"):
            state_from_dict({"dims": [1], "re": [[float("nan")]], "im": [[0.0]]})

    def test_non_object_rejected(self):
        with pytest.raises(ConfigError, match="State JSON"):
            state_from_dict([1, 2, 3])

    def test_subnormalized_state_accepted(self):
        rho = state_from_dict({"dims": [2], "re": [[0.4, 0.0], [0.0, 0.3]], "im": [[0.0, 0.0], [0.0, 0.0]]})
        assert rho.state.trace == pytest.approx(0.7)
