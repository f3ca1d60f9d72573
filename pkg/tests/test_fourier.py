import math

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import given

from spectralsum.errors import QuadratureBudgetExceeded, TailTooHeavy
from spectralsum.fourier import (
    QuadConfig,
    combine,
    fourier_measure,
    gaussian,
    mollifier_eval,
    parse_function_spec,
    plateau,
    smooth_step,
    unit,
    window_extend,
)

KINDS = [
    ("unitary_phase", {"t": 0.7}),
    ("gaussian", {"width": 1.0}),
    ("gaussian", {"width": 0.6, "center": 0.5, "freq": 1.5}),
    ("atom_mollifier", {"alpha": 0.3, "eps": 0.25}),
    ("mollifier_window", {"alpha": 0.0, "beta": 3.0, "eps": 0.25}),
    ("bump_window", {"alpha": -1.0, "beta": 1.0, "margin": 0.3}),
    ("windowed_polynomial", {"coeffs": (0.5, -1.0, 2.0), "radius": 2.0}),
    ("exponential_decay", {"tau": 0.8, "radius": 2.0}),
]


@pytest.mark.parametrize("kind, params", KINDS)
def test_measure_reproduces_function(kind, params):
    f = fourier_measure(kind, **params)
    x = np.linspace(-2.5, 2.5, 41)
    assert np.max(np.abs(f.inverse(x) - f(x))) <= 1e-9


@pytest.mark.parametrize("kind, params", KINDS)
def test_quadrature_error_is_honest(kind, params):
    f = fourier_measure(kind, **params)
    rule = f.quadrature(2.5)
    x = np.linspace(-2.5, 2.5, 31)
    observed = np.max(np.abs(np.exp(1j * np.outer(x, rule.nodes)) @ rule.weights - f(x)))
    assert observed <= rule.error + 1e-12


def test_gaussian_measure_closed_form():
    # integral of exp(-t^2/2)/sqrt(2 pi) exp(i t x) dt = exp(-x^2/2)
    f = gaussian()
    assert f.fnorm == 1.0
    rule = f.quadrature(3.0)
    t = rule.nodes
    h = t[1] - t[0]
    np.testing.assert_allclose(rule.weights, h * np.exp(-t ** 2 / 2) / math.sqrt(2 * math.pi), atol=1e-16)


def test_spacing_refinement_is_stable():
    f = fourier_measure("mollifier_window", alpha=0.0, beta=3.0, eps=0.1)
    x = np.linspace(-2, 2, 17)
    coarse = f.inverse(x)
    fine = f.inverse(x, QuadConfig(spacing_scale=0.5))
    assert np.max(np.abs(coarse - fine)) <= 1e-9


@given(st.floats(-3, 3), st.floats(0.2, 2.0))
def test_conjugate_function(x, w):
    f = gaussian(width=w, freq=1.3)
    g = f.conj()
    assert abs(g(x) - np.conj(f(x))) <= 1e-15
    assert abs(g.inverse(x)[0] - np.conj(f(x))) <= 1e-10


def test_combine_linear():
    f = 2.0 * gaussian() - unit()
    x = np.array([-1.0, 0.0, 0.5])
    np.testing.assert_allclose(f(x), 2 * np.exp(-x ** 2 / 2) - 1)
    np.testing.assert_allclose(f.inverse(x), f(x), atol=1e-10)
    assert f.fnorm == 3.0
    assert combine([(1.0, f), (1.0, unit())]).fnorm == 4.0


@pytest.mark.parametrize("u, expected", [(-1.0, 0.0), (0.0, 0.0), (0.5, 0.5), (1.0, 1.0), (2.0, 1.0)])
def test_smooth_step(u, expected):
    assert smooth_step(np.array(u)) == pytest.approx(expected, abs=1e-15)


@given(st.floats(-5, 5), st.floats(0.5, 3))
def test_plateau_bounds(x, r):
    v = float(plateau(x, r))
    assert 0.0 <= v <= 1.0
    if abs(x) <= r:
        assert v == 1.0
    if abs(x) >= 1.25 * r:
        assert v == 0.0


def test_mollifier_values():
    assert mollifier_eval(0.0, 3.0, 0.1, 0.0) == 1.0
    assert mollifier_eval(0.0, 3.0, 0.1, 3.0) == pytest.approx(math.exp(-90.0), abs=1e-300)
    # inside the window the two terms add to about one for small eps
    assert mollifier_eval(0.0, 3.0, 1e-3, 1.5) == pytest.approx(1.0, abs=2e-3)


def test_window_extend_is_polynomial_on_window():
    f = window_extend([1.0, 0.0, 1.0], 2.0)
    x = np.linspace(-2, 2, 9)
    np.testing.assert_allclose(f(x), 1 + x ** 2)
    assert f.polynomial()[1] == 2.0


@pytest.mark.parametrize(
    "text, probe, expected",
    [
        ("gaussian:width=2", 1.0, math.exp(-1 / 8)),
        ("gauss:width=1,center=1", 1.0, 1.0),
        ("phase:t=1.5", 0.0, 1.0),
        ("poly:coeffs=0,1,radius=3", 2.0, 2.0),
        ("unit", 7.0, 1.0),
    ],
)
def test_parse_function_spec(text, probe, expected):
    assert complex(parse_function_spec(text)(np.array(probe))) == pytest.approx(expected)


def test_parse_radius_fallback():
    f = parse_function_spec("poly:coeffs=0,1", radius=4.0)
    assert f.params["radius"] == 4.0
    with pytest.raises(ValueError):
        parse_function_spec("poly:coeffs=0,1")


@pytest.mark.parametrize("text", ["nope:x=1", "gaussian:width=0", "gaussian:1", "mollifier:alpha=2,beta=1"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        parse_function_spec(text)


def test_tail_too_heavy():
    with pytest.raises(TailTooHeavy):
        fourier_measure("bump_window", alpha=0.0, beta=1.0, margin=1e-3, max_samples=2048)


def test_quadrature_budget():
    with pytest.raises(QuadratureBudgetExceeded):
        gaussian(width=0.01).quadrature(50.0, QuadConfig(max_nodes=10))


def test_with_cover_extends_sampled_support():
    f = window_extend([0.0, 1.0], 1.0)
    g = f.with_cover(6.0)
    assert g.covers(6.0) and not f.covers(6.0)
    np.testing.assert_allclose(g.inverse([5.0]), f(np.array([5.0])), atol=1e-9)
