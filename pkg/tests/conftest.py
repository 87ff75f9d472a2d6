import numpy as np
import pytest
from hypothesis import strategies as st

from swapcm.qcore import DensityMatrix


def random_density(rng, num_qubits=1, rank=None):
    """Random full-rank (or given-rank) density matrix from a Ginibre draw."""
    d = 1 << num_qubits
    k = rank or d
    g = rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_unitary(rng, d):
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_bloch(rng, radius=None):
    v = rng.normal(size=3)
    r = rng.uniform() ** (1 / 3) if radius is None else radius
    return v / np.linalg.norm(v) * r


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


seeds = st.integers(min_value=0, max_value=2**32 - 1)
angles = st.floats(min_value=-2 * np.pi, max_value=2 * np.pi, allow_nan=False)


@st.composite
def bloch_vectors(draw):
    v = draw(st.tuples(*[st.floats(-1, 1, allow_nan=False)] * 3))
    n = float(np.linalg.norm(v))
    return tuple(c / n for c in v) if n > 1 else v


@st.composite
def densities(draw, num_qubits=1):
    return random_density(np.random.default_rng(draw(seeds)), num_qubits)
