"""
Seeded random states, unitaries and spectra.

All draws come from a Philox counter-based generator keyed by the seed, so
a (dims, rank, seed) triple always yields the same matrix bit for bit.
"""

import math
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from smooth_entropy.exceptions import ParameterRangeError
from smooth_entropy.linalg.core import hermitize
from smooth_entropy.linalg.operators import DensityOperator, MultipartiteState
from smooth_entropy.types import TraceClass


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def derive_seed(master_seed: int, index: int) -> int:
    """Independent child seed for trial `index` of a run keyed by `master_seed`."""
    seq = np.random.SeedSequence([int(master_seed), int(index)])
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def ginibre(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """Matrix of independent standard complex Gaussians (E|g|^2 = 1)."""
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / math.sqrt(2.0)


def random_density(dims: Sequence[int], rank: Optional[int] = None, seed: int = 0) -> MultipartiteState:
    """Ginibre-induced state G G^dag / Tr(G G^dag) with G of shape (dim, rank)."""
    dims = tuple(int(d) for d in dims)
    d = math.prod(dims)
    rank = d if rank is None else int(rank)
    if not 1 <= rank <= d:
        raise ParameterRangeError(f"rank must lie in 1..{d}, got {rank}")

    g = ginibre(d, rank, make_rng(seed))
    m = g @ g.conj().T
    m = hermitize(m / np.real(np.trace(m)))
    state = DensityOperator.from_matrix(m, trace_class=TraceClass.NORMALIZED)
    return MultipartiteState(state=state, dims=dims)


def random_unitary(d: int, seed: int = 0) -> np.ndarray:
    """Haar-distributed unitary from the phase-corrected QR of a Ginibre matrix."""
    q, r = scipy.linalg.qr(ginibre(d, d, make_rng(seed)))
    diag = np.diag(r)
    return q * (diag / np.abs(diag))[np.newaxis, :]


def random_spectrum(d: int, seed: int = 0, rank: Optional[int] = None) -> np.ndarray:
    """Non-increasing eigenvalues of a Ginibre-induced state of dimension d."""
    rank = d if rank is None else rank
    if not 1 <= rank <= d:
        raise ParameterRangeError(f"rank must lie in 1..{d}, got {rank}")
    g = ginibre(d, rank, make_rng(seed))
    # Squared singular values of G are the unnormalized spectrum of G G^dag
    s = np.concatenate([scipy.linalg.svdvals(g) ** 2, np.zeros(d - min(d, rank))])
    s = np.sort(s)[::-1][:d]
    return s / s.sum()
