import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import expm

from spectralsum._util import opnorm
from spectralsum.altint import (
    AlternatingIntegral,
    alt_integral,
    converge_study,
    doubling_schedule,
    empirical_order,
    lattice_distributions,
    trotter_product,
)
from spectralsum.errors import BudgetExceeded, DimensionMismatch, NotLatticeRepresentable
from spectralsum.fourier import fourier_measure, gaussian, window_extend
from spectralsum.instances import SIGMA_X, SIGMA_Z
from spectralsum.linalg import eig_hermitian

from conftest import hermitian_pairs, lattice_pairs, naive_alternating

# Operator-norm errors of F_N(exp(-s^2/2)) against exp(-1) I for (sigma_z, sigma_x),
# from the explicit tuple loop in conftest.naive_alternating.
PAULI_GAUSS_ERRORS = {1: 0.47626315534762226, 2: 0.21733245045449562,
                      4: 0.09522168956682414, 8: 0.0463626621572901}


@pytest.mark.parametrize("route", ["enumeration", "sumdp", "fourier"])
@pytest.mark.parametrize("N", [1, 2, 4, 8])
def test_pauli_gaussian_frozen(pauli, route, N):
    ai = AlternatingIntegral(*pauli)
    err = opnorm(ai.evaluate(gaussian(), N, route) - np.exp(-1) * np.eye(2))
    assert err == pytest.approx(PAULI_GAUSS_ERRORS[N], abs=1e-11)


@given(hermitian_pairs(dims=(2, 3)), st.integers(1, 3), st.sampled_from([(1.0, 1.0), (0.5, -2.0)]))
def test_enumeration_matches_naive_loop(pair, N, ab):
    A, B = pair
    f = gaussian(width=0.7, freq=0.4)
    got = alt_integral(eig_hermitian(A), eig_hermitian(B), *ab, f, N, route="enumeration")
    np.testing.assert_allclose(got, naive_alternating(A, B, *ab, f, N), atol=1e-12)


@given(lattice_pairs(), st.integers(1, 4))
def test_routes_agree_on_lattice(pair, N):
    sa, sb = eig_hermitian(pair[0]), eig_hermitian(pair[1])
    ai = AlternatingIntegral(sa, sb, 1.0, 0.5)
    f = gaussian(width=1.3, center=0.2)
    ref = ai.evaluate(f, N, "enumeration")
    assert opnorm(ai.evaluate(f, N, "sumdp") - ref) <= 1e-10
    assert opnorm(ai.evaluate(f, N, "fourier") - ref) <= 1e-10


@given(hermitian_pairs(dims=(2, 3, 4)), st.sampled_from([1, 2, 4, 8]))
def test_linear_weight_exact(pair, N):
    sa, sb = eig_hermitian(pair[0]), eig_hermitian(pair[1])
    ai = AlternatingIntegral(sa, sb, 0.5, -2.0)
    f = window_extend([0.0, 1.0], 1.25 * ai.radius)
    assert opnorm(ai.evaluate(f, N) - ai.target) <= 1e-11


@pytest.mark.parametrize("t", [0.3, 1.0, 2.5])
@pytest.mark.parametrize("N", [1, 3, 16])
def test_phase_weight_is_trotter_product(pauli, t, N):
    ai = AlternatingIntegral(*pauli, 1.0, 1.0)
    f = fourier_measure("unitary_phase", t=t)
    U = np.linalg.matrix_power(expm(1j * t * SIGMA_Z / N) @ expm(1j * t * SIGMA_X / N), N)
    np.testing.assert_allclose(ai.evaluate(f, N, "fourier"), U, atol=1e-12)
    np.testing.assert_allclose(trotter_product(*pauli, 1.0, 1.0, t, N), U, atol=1e-12)


def test_commuting_exact_every_N():
    sa, sb = eig_hermitian(np.diag([1.0, -1.0])), eig_hermitian(np.diag([2.0, 3.0]))
    ai = AlternatingIntegral(sa, sb, 1.0, 1.0)
    f = gaussian(width=2.0)
    for N in (1, 4, 16):
        assert opnorm(ai.evaluate(f, N, "fourier") - ai.reference(f)) <= 1e-10


def test_adjoint_reverses_order():
    rng = np.random.default_rng(5)
    from spectralsum.linalg import random_hermitian

    sa, sb = eig_hermitian(random_hermitian(3, rng)), eig_hermitian(random_hermitian(3, rng))
    f = gaussian(freq=0.8)
    for N in (1, 2, 3):
        ab = alt_integral(sa, sb, 1.0, 1.0, f, N, route="enumeration", order="AB")
        ba = alt_integral(sa, sb, 1.0, 1.0, f.conj(), N, route="enumeration", order="BA")
        np.testing.assert_allclose(ab.conj().T, ba, atol=1e-13)


def test_sumdp_rejects_irrational_lattice():
    sa = eig_hermitian(np.diag([0.0, 1.0]))
    sb = eig_hermitian(np.diag([0.0, np.sqrt(2)]))
    with pytest.raises(NotLatticeRepresentable):
        AlternatingIntegral(sa, sb).evaluate(gaussian(), 2, "sumdp")
    assert AlternatingIntegral(sa, sb).resolve_route(gaussian()) == "fourier"


def test_enumeration_budget(pauli, monkeypatch):
    monkeypatch.setenv("SPECTRAL_SUM_BUDGET", "100")
    with pytest.raises(BudgetExceeded):
        alt_integral(*pauli, 1.0, 1.0, gaussian(), 4, route="enumeration")
    assert alt_integral(*pauli, 1.0, 1.0, gaussian(), 3, route="enumeration").shape == (2, 2)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        AlternatingIntegral(eig_hermitian(np.eye(2)), eig_hermitian(np.eye(3)))


def test_lattice_distributions_sum_to_identity(pauli):
    dists = lattice_distributions(*pauli, 1.0, 1.0, (5, 1, 2))
    assert sorted(dists) == [1, 2, 5]
    for N, (avgs, G) in dists.items():
        np.testing.assert_allclose(G.sum(axis=0), np.eye(2), atol=1e-13)
        assert avgs.min() == pytest.approx(-2.0) and avgs.max() == pytest.approx(2.0)


def test_converge_study_report(pauli):
    rep = converge_study(*pauli, 1.0, 1.0, gaussian(), doubling_schedule(64), route="fourier")
    assert rep.route == "fourier"
    assert np.all(np.diff(rep.errors) < 0)
    assert 0.8 <= rep.empirical_order <= 1.2
    assert np.all(rep.error_bounds < 1e-11)
    assert [n for n, _ in rep.rows()] == [1, 2, 4, 8, 16, 32, 64]


@pytest.mark.parametrize("n_max, expected", [(1, [1]), (8, [1, 2, 4, 8]), (10, [1, 2, 4, 8])])
def test_doubling_schedule(n_max, expected):
    assert doubling_schedule(n_max) == expected


def test_empirical_order_exact_power():
    Ns = [1, 2, 4, 8, 16]
    assert empirical_order(Ns, [3.0 / n ** 1.5 for n in Ns]) == pytest.approx(1.5)
    assert np.isnan(empirical_order(Ns, [1, 0.5, 0.0, 0.1, 0.1]))
