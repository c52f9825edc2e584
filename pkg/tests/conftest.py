"""
Pytest configuration and shared fixtures for the smooth_entropy tests.
"""

import logging

import numpy as np
import pytest

from smooth_entropy.linalg import (
    MultipartiteState,
    diagonal_state,
    maximally_entangled,
    maximally_mixed,
    random_density,
    tensor,
    write_state,
)

# Configure logging for tests
logging.basicConfig(level=logging.INFO)


@pytest.fixture
def bell() -> MultipartiteState:
    """Two-qubit maximally entangled state."""
    return maximally_entangled(2)


@pytest.fixture
def mixed4() -> MultipartiteState:
    """I_4 / 4 split as 2x2."""
    return maximally_mixed((2, 2))


@pytest.fixture
def product_state() -> MultipartiteState:
    """diag(0.7, 0.3) (x) diag(0.6, 0.4)."""
    return tensor(diagonal_state([0.7, 0.3]), diagonal_state([0.6, 0.4]))


@pytest.fixture
def qubit_75() -> MultipartiteState:
    """diag(0.75, 0.25), the reference single-copy source."""
    return diagonal_state([0.75, 0.25])


@pytest.fixture
def random_222() -> MultipartiteState:
    """A fixed random three-qubit state."""
    return random_density((2, 2, 2), seed=7)


@pytest.fixture
def bell_file(tmp_path, bell):
    path = tmp_path / "bell.json"
    write_state(bell, path)
    return path


@pytest.fixture
def mixed4_file(tmp_path, mixed4):
    path = tmp_path / "mixed4.json"
    write_state(mixed4, path)
    return path


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
