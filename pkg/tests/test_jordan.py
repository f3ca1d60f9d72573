from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spectralsum._util import opnorm
from spectralsum.errors import BudgetExceeded
from spectralsum.instances import SIGMA_X, SIGMA_Z
from spectralsum.jordan import (
    decomposition_operator,
    jordan_limit,
    parse_coeffs,
    poly_direct,
    poly_limit,
    sylvester_decompose,
    symmetrized_direct,
)
from spectralsum.linalg import eig_hermitian, random_hermitian

from conftest import hermitian_pairs

DEGREES = [(p, m - p) for m in range(1, 7) for p in range(m + 1)]


@pytest.mark.parametrize("p, q", DEGREES)
def test_sylvester_residual(p, q):
    assert sylvester_decompose(p, q).residual() <= 1e-10


@pytest.mark.parametrize("p, q", [(1, 1), (2, 1), (2, 2), (3, 2)])
def test_sylvester_exact_rational_expansion(p, q):
    # expand with exact rationals: the x^p y^q coefficient must be 1, the rest 0
    dec = sylvester_decompose(p, q)
    m = p + q
    coef = [Fraction(0)] * (m + 1)
    for c, a, b in dec.terms:
        c, a, b = Fraction(c), Fraction(a), Fraction(b)
        for j in range(m + 1):
            coef[j] += c * comb(m, j) * a ** (m - j) * b ** j
    assert all(abs(float(v) - (j == q)) < 1e-12 for j, v in enumerate(coef))


@pytest.mark.parametrize("p, q", [(3, 0), (0, 4)])
def test_pure_powers_single_term(p, q):
    assert len(sylvester_decompose(p, q).terms) == 1


@pytest.mark.parametrize("p, q", [(p, q) for p, q in DEGREES if p + q <= 5])
def test_decomposition_identity(p, q):
    rng = np.random.default_rng(p * 10 + q)
    A, B = random_hermitian(3, rng), random_hermitian(3, rng)
    assert opnorm(decomposition_operator(A, B, p, q) - symmetrized_direct(A, B, p, q)) <= 1e-9


def test_symmetrized_small_cases():
    A, B = SIGMA_Z, SIGMA_X
    np.testing.assert_allclose(symmetrized_direct(A, B, 1, 1), 0.5 * (A @ B + B @ A))
    np.testing.assert_allclose(symmetrized_direct(A, B, 2, 0), A @ A)
    words = [A @ A @ B, A @ B @ A, B @ A @ A]
    np.testing.assert_allclose(symmetrized_direct(A, B, 2, 1), sum(words) / 3)


def test_symmetrized_budget():
    with pytest.raises(BudgetExceeded):
        symmetrized_direct(SIGMA_Z, SIGMA_X, 10, 10)


@given(hermitian_pairs(dims=(3,)))
def test_jordan_limit_first_order(pair):
    A, B = pair
    sa, sb = eig_hermitian(A), eig_hermitian(B)
    target = 0.5 * (A @ B + B @ A)
    e64 = opnorm(jordan_limit(sa, sb, 64) - target)
    e128 = opnorm(jordan_limit(sa, sb, 128) - target)
    assert e128 <= e64
    # leading error term is [A, B]/(2N) in the AB order
    assert e64 <= opnorm(A @ B - B @ A) / 64


def test_jordan_commuting_exact():
    sa, sb = eig_hermitian(np.diag([1.0, 2.0])), eig_hermitian(np.diag([-1.0, 3.0]))
    np.testing.assert_allclose(jordan_limit(sa, sb, 1), np.diag([-1.0, 6.0]), atol=1e-12)


def test_poly_limit_pauli(pauli):
    coeffs = {(2, 1): 1.0, (0, 0): 0.5}
    target = poly_direct(SIGMA_Z, SIGMA_X, coeffs)
    errs = [opnorm(poly_limit(*pauli, coeffs, N) - target) for N in (4, 16, 64)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-3


@pytest.mark.parametrize(
    "text, expected",
    [("1,1,2", {(1, 1): 2.0}), ("2,0,1;0,2,1", {(2, 0): 1.0, (0, 2): 1.0}), ("1,1,1;1,1,1", {(1, 1): 2.0})],
)
def test_parse_coeffs(text, expected):
    assert parse_coeffs(text) == expected


@pytest.mark.parametrize("text", ["1,1", "a,b,c"])
def test_parse_coeffs_rejects(text):
    with pytest.raises(ValueError):
        parse_coeffs(text)


def test_poly_degree_cap(pauli):
    with pytest.raises(ValueError):
        poly_limit(*pauli, {(4, 3): 1.0}, 2)
