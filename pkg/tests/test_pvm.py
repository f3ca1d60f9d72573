import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spectralsum._util import opnorm
from spectralsum.errors import BoundaryTouchesSpectrum, StagnationNotReached
from spectralsum.linalg import eig_hermitian
from spectralsum.pvm import (
    WindowSpec,
    bump_margin,
    bump_window,
    exact_projector,
    ft_spectral_measure,
    reconstruct_projector,
)

SQRT2 = np.sqrt(2.0)


def test_exact_projector_pauli(pauli):
    # sigma_z + sigma_x has eigenvalues +-sqrt 2; [0, 3) keeps the upper one
    P = exact_projector(*pauli, 1.0, 1.0, 0.0, 3.0)
    v = np.array([1.0 + SQRT2, 1.0]) / np.sqrt((1 + SQRT2) ** 2 + 1)
    np.testing.assert_allclose(P, np.outer(v, v), atol=1e-14)


@pytest.mark.parametrize("alpha, beta, rank", [(-3, 3, 2), (0, 3, 1), (-3, 0, 1), (2, 3, 0)])
def test_exact_projector_ranks(pauli, alpha, beta, rank):
    assert np.trace(exact_projector(*pauli, 1.0, 1.0, alpha, beta)).real == pytest.approx(rank)


def test_reconstruct_mollifier(pauli):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", StagnationNotReached)
        est, rep = reconstruct_projector(*pauli, 1.0, 1.0, WindowSpec(0.0, 3.0))
    assert rep.final_error < 1e-2
    assert opnorm(est - rep.exact) == rep.final_error
    assert len(rep.table) == 6 * 9
    assert rep.boundary_defect == 0.0


def test_reconstruct_bump(pauli):
    est, rep = reconstruct_projector(*pauli, 1.0, 1.0, WindowSpec(0.0, 3.0, variant="bump"))
    assert rep.final_error < 1e-6
    assert rep.stagnated == (True,)


def test_empty_window_is_zero(pauli):
    est, rep = reconstruct_projector(*pauli, 1.0, 1.0, WindowSpec(2.0, 3.0, variant="bump"))
    assert opnorm(est) < 1e-8


def test_stagnation_warning(pauli):
    spec = WindowSpec(0.0, 3.0, eps_schedule=(1e-3,), N_schedule=(1, 2, 4))
    with pytest.warns(StagnationNotReached):
        _, rep = reconstruct_projector(*pauli, 1.0, 1.0, spec)
    assert rep.stagnated == (False,)


@pytest.mark.filterwarnings("ignore::spectralsum.errors.StagnationNotReached")
def test_boundary_warning(pauli):
    with pytest.warns(RuntimeWarning, match="edge"):
        reconstruct_projector(*pauli, 1.0, 1.0,
                              WindowSpec(-3.0, SQRT2, eps_schedule=(0.5,), N_schedule=(1, 2)))


def test_bump_margin():
    assert bump_margin(0.0, 3.0, [-SQRT2, SQRT2]) == pytest.approx(SQRT2 / 2)
    assert bump_margin(0.0, 1.0, [-5.0, 5.0]) == pytest.approx(0.25)
    assert bump_margin(0.0, 1.0, [0.1, 2.0]) == pytest.approx(0.05)
    with pytest.raises(BoundaryTouchesSpectrum):
        bump_margin(0.0, 1.0, [0.0, 2.0])


@given(st.floats(-2, 2))
def test_bump_window_separates_spectrum(alpha):
    spectrum = np.array([-SQRT2, SQRT2])
    beta = alpha + 1.0
    try:
        f = bump_window(alpha, beta, spectrum)
    except BoundaryTouchesSpectrum:
        return
    inside = (spectrum >= alpha) & (spectrum < beta)
    np.testing.assert_allclose(f(spectrum), inside.astype(float), atol=1e-15)


@pytest.mark.parametrize(
    "kw", [dict(alpha=1.0, beta=0.0), dict(alpha=0.0, beta=1.0, eps_schedule=(0.1, 0.2)),
           dict(alpha=0.0, beta=1.0, N_schedule=(2, 1)), dict(alpha=0.0, beta=1.0, variant="x")])
def test_window_spec_validation(kw):
    with pytest.raises(ValueError):
        WindowSpec(**kw)


def test_ft_spectral_measure(pauli):
    spec = eig_hermitian(pauli[0].matrix + pauli[1].matrix)
    e0 = np.array([1.0, 0.0])
    # <e0| exp(i t (sz + sx)) e0> = cos(sqrt2 t) + i sin(sqrt2 t)/sqrt2
    t = 0.9
    expected = np.cos(SQRT2 * t) + 1j * np.sin(SQRT2 * t) / SQRT2
    assert ft_spectral_measure(spec, e0, e0, t) == pytest.approx(expected, abs=1e-14)
