import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import settings

from spectralsum.instances import SIGMA_X, SIGMA_Z
from spectralsum.linalg import eig_hermitian, random_hermitian

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


@pytest.fixture
def pauli():
    return eig_hermitian(SIGMA_Z), eig_hermitian(SIGMA_X)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@st.composite
def hermitian_pairs(draw, dims=(2, 3, 4)):
    """Seeded random Hermitian pairs of unit norm."""
    dim = draw(st.sampled_from(dims))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    return random_hermitian(dim, rng), random_hermitian(dim, rng)


@st.composite
def lattice_pairs(draw, dims=(2, 3)):
    """Pairs with integer spectra in random eigenbases."""
    dim = draw(st.sampled_from(dims))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(2):
        q, _ = np.linalg.qr(rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
        ev = rng.integers(-2, 3, size=dim).astype(float)
        out.append(q @ np.diag(ev) @ q.conj().T)
    return out[0], out[1]


def naive_alternating(A, B, a, b, f, N):
    """Independent oracle: explicit loop over every index tuple."""
    import itertools

    sa, sb = eig_hermitian(A), eig_hermitian(B)
    d = sa.dim
    out = np.zeros((d, d), dtype=complex)
    pairs = list(itertools.product(range(sa.size), range(sb.size)))
    for tup in itertools.product(pairs, repeat=N):
        s = sum(a * sa.eigenvalues[i] + b * sb.eigenvalues[j] for i, j in tup) / N
        M = np.eye(d, dtype=complex)
        for i, j in tup:
            M = M @ sa.projectors[i] @ sb.projectors[j]
        out += f(s) * M
    return out
