import json

import hypothesis.extra.numpy as hnp
import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import given
from scipy.linalg import expm

from spectralsum.errors import DimensionMismatch, NotHermitian
from spectralsum.instances import SIGMA_X, SIGMA_Z
from spectralsum.linalg import (
    HermitianMatrix,
    apply_function,
    dump_matrix_json,
    eig_hermitian,
    load_matrix_json,
    matrix_from_json,
    matrix_to_json,
    pvm_pushforward,
    random_hermitian,
    spectral_residuals,
    unitary_exp,
)

from conftest import hermitian_pairs


@given(hermitian_pairs(dims=(1, 2, 3, 5)))
def test_residuals_small(pair):
    A, _ = pair
    r = spectral_residuals(eig_hermitian(A))
    assert r["rank_total"] == A.shape[0]
    for key in ("idempotence", "hermiticity", "orthogonality", "completeness", "reconstruction"):
        assert r[key] <= 1e-10


@pytest.mark.parametrize(
    "diag, expected",
    [
        ([1.0, 1.0, -1.0], ([-1.0, 1.0], [1, 2])),
        ([0.0, 0.0, 0.0], ([0.0], [3])),
        ([2.0, 1.0, 3.0], ([1.0, 2.0, 3.0], [1, 1, 1])),
        ([1.0, 1.0 + 1e-12, 5.0], ([1.0 + 5e-13, 5.0], [2, 1])),
    ],
)
def test_degenerate_grouping(diag, expected):
    spec = eig_hermitian(np.diag(diag))
    np.testing.assert_allclose(spec.eigenvalues, expected[0], atol=1e-13)
    assert list(spec.ranks) == expected[1]


def test_unitary_exp_matches_expm():
    spec = eig_hermitian(SIGMA_X + 0.3 * SIGMA_Z)
    np.testing.assert_allclose(unitary_exp(spec, 0.7), expm(0.7j * (SIGMA_X + 0.3 * SIGMA_Z)), atol=1e-14)


def test_apply_function_exp():
    rng = np.random.default_rng(1)
    A = random_hermitian(4, rng)
    np.testing.assert_allclose(apply_function(eig_hermitian(A), np.exp), expm(A), atol=1e-13)


def test_pushforward_merges_preimages():
    spec = eig_hermitian(np.diag([-1.0, 1.0, 2.0]))
    pushed = pvm_pushforward(spec, np.square)
    np.testing.assert_allclose(pushed.eigenvalues, [1.0, 4.0])
    assert list(pushed.ranks) == [2, 1]


def test_not_hermitian():
    with pytest.raises(NotHermitian):
        HermitianMatrix(np.array([[0.0, 1.0], [0.0, 0.0]]))


@pytest.mark.parametrize("shape", [(2, 3), (0, 0), (2,)])
def test_bad_shapes(shape):
    with pytest.raises(DimensionMismatch):
        HermitianMatrix(np.zeros(shape))


def test_frozen_entries():
    h = HermitianMatrix(np.eye(2))
    with pytest.raises(ValueError):
        h.entries[0, 0] = 3.0


@given(hnp.arrays(np.float64, (3, 3), elements=st.floats(-5, 5)))
def test_json_round_trip(x):
    m = x + x.T + 1j * (x - x.T)
    np.testing.assert_array_equal(matrix_from_json(json.loads(json.dumps(matrix_to_json(m)))), m)


def test_json_file_round_trip(tmp_path):
    m = SIGMA_X + 2 * SIGMA_Z
    path = tmp_path / "m.json"
    dump_matrix_json(m, path)
    np.testing.assert_array_equal(load_matrix_json(path).entries, m)


def test_ragged_json_rejected():
    with pytest.raises(ValueError, match="ragged"):
        matrix_from_json({"dim": 2, "re": [[1, 0], [0]]})


def test_random_hermitian_norm():
    h = random_hermitian(6, np.random.default_rng(0), norm=2.5)
    assert abs(np.linalg.norm(h, 2) - 2.5) < 1e-12
    np.testing.assert_allclose(h, h.conj().T)


@given(hermitian_pairs(dims=(2, 3, 4)))
def test_apply_function_is_multiplicative(pair):
    spec = eig_hermitian(pair[0])
    f, g = np.cos, (lambda x: np.exp(-x * x))
    fg = apply_function(spec, lambda x: f(x) * g(x))
    np.testing.assert_allclose(fg, apply_function(spec, f) @ apply_function(spec, g), atol=1e-10)
