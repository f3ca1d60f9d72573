"""Periodic-grid checks of the continuum examples.

Position is diagonal on the grid and momentum is diagonal in the discrete
Fourier basis, so Trotter products of their exponentials cost two FFTs per
step.  Momentum follows the convention P = -i d/dx by default, under which
exp(i s P) translates by +s; ``convention="alternate"`` selects P = +i d/dx.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.integrate import quad

from .errors import StateTooWide
from .linalg import HermitianMatrix

__all__ = [
    "Grid",
    "position_operator",
    "momentum_operator",
    "hamiltonian_ho",
    "gaussian_state",
    "weyl_check",
    "weyl_phase_product",
    "feynman_kac_ho",
    "dirichlet_tv",
    "dirichlet_fit",
    "truncated_bilinear_form",
    "truncated_form_exact",
    "WeylResult",
    "FKResult",
]

BOUNDARY_FRACTION = 0.4
BOUNDARY_TOL = 1e-10
CONVENTIONS = {"standard": 1.0, "alternate": -1.0}


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid of ``points`` nodes on an interval of length ``length``.

    ``centered=True`` places the nodes at -L/2 + j h; otherwise at j h, which
    suits functions on [0, L).
    """

    points: int = 512
    length: float = 20.0
    centered: bool = True

    def __post_init__(self):
        k = self.points
        if k < 8 or k & (k - 1):
            raise ValueError(f"points must be a power of two >= 8, got {k}")
        if not self.length > 0:
            raise ValueError(f"length must be positive, got {self.length}")

    @property
    def spacing(self) -> float:
        return self.length / self.points

    @property
    def x(self) -> np.ndarray:
        start = -self.length / 2 if self.centered else 0.0
        return start + self.spacing * np.arange(self.points)

    @property
    def wavenumbers(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.points, self.spacing)

    def inner(self, phi, psi) -> complex:
        """Riemann sum for the L2 inner product, conjugate-linear in phi."""
        return complex(self.spacing * np.vdot(phi, psi))

    def multiplier(self, symbol, v):
        """Apply a Fourier multiplier symbol(kappa) to grid samples v."""
        return np.fft.ifft(symbol * np.fft.fft(v))


def _sign(convention):
    try:
        return CONVENTIONS[convention]
    except KeyError:
        raise ValueError(f"convention must be one of {tuple(CONVENTIONS)}") from None


def position_operator(grid: Grid) -> HermitianMatrix:
    return HermitianMatrix(np.diag(grid.x).astype(complex))


def momentum_operator(grid: Grid, convention: str = "standard") -> HermitianMatrix:
    """Dense matrix of the Fourier multiplier by +-kappa."""
    k = grid.points
    F = np.fft.fft(np.eye(k), axis=0)
    P = np.fft.ifft(_sign(convention) * grid.wavenumbers[:, None] * F, axis=0)
    return HermitianMatrix(0.5 * (P + P.conj().T))


def hamiltonian_ho(grid: Grid, m: float = 1.0, omega: float = 1.0) -> HermitianMatrix:
    """P^2 / 2m + omega^2 X^2 / 2 on the grid."""
    k = grid.points
    F = np.fft.fft(np.eye(k), axis=0)
    T = np.fft.ifft(grid.wavenumbers[:, None] ** 2 / (2 * m) * F, axis=0)
    H = T + np.diag(0.5 * omega ** 2 * grid.x ** 2)
    return HermitianMatrix(0.5 * (H + H.conj().T))


def gaussian_state(grid: Grid, center: float = 0.0, width: float = 1.0, momentum: float = 0.0):
    """Normalized Gaussian (pi w^2)^(-1/4) exp(-(x-c)^2 / 2w^2 + i p x) sampled on the grid."""
    x = grid.x
    g = (np.pi * width ** 2) ** -0.25 * np.exp(-((x - center) ** 2) / (2 * width ** 2))
    return g * np.exp(1j * momentum * x) if momentum else g.astype(complex)


def _guard(grid: Grid, *states):
    if not grid.centered:
        return
    edge = np.abs(grid.x) >= BOUNDARY_FRACTION * grid.length
    for v in states:
        v = np.asarray(v)
        total = float(np.sum(np.abs(v) ** 2))
        outer = float(np.sum(np.abs(v[edge]) ** 2))
        if total and outer > BOUNDARY_TOL * total:
            raise StateTooWide(
                f"{outer / total:.2e} of the state's mass lies within "
                f"{(0.5 - BOUNDARY_FRACTION) * grid.length:g} of the boundary")


class WeylResult(NamedTuple):
    lhs: complex
    rhs: complex
    abs_err: float


def weyl_check(grid: Grid, phi, psi, t: float, N: int = 256,
               convention: str = "standard") -> WeylResult:
    """Trotter product of exp(i t X/N) and exp(i t P/N) against the Weyl closed form.

    lhs = <phi| (exp(i t X/N) exp(i t P/N))^N psi>;
    rhs = exp(i s t^2/2) integral conj(phi(x)) exp(i t x) psi(x + s t) dx,
    s = +1 for P = -i d/dx and s = -1 for P = +i d/dx.  The translation
    is an exact Fourier phase.
    """
    if abs(t) >= grid.length / 4:
        raise ValueError(f"|t| = {abs(t)} must be below L/4 = {grid.length / 4}")
    _guard(grid, phi, psi)
    s = _sign(convention)
    x, kap = grid.x, grid.wavenumbers
    step_x = np.exp(1j * t / N * x)
    step_p = np.exp(1j * t / N * s * kap)
    v = np.asarray(psi, dtype=complex)
    for _ in range(N):
        v = step_x * grid.multiplier(step_p, v)
    lhs = grid.inner(phi, v)
    shifted = grid.multiplier(np.exp(1j * s * t * kap), psi)
    rhs = np.exp(1j * s * t * t / 2) * grid.inner(phi, np.exp(1j * t * x) * shifted)
    return WeylResult(lhs, complex(rhs), abs(lhs - rhs))


def weyl_phase_product(grid: Grid, phi, psi, t: float, convention: str = "standard") -> complex:
    """exp(i s t^2/2) <phi| exp(i t X) exp(i t P) psi>, the Weyl-relation form."""
    s = _sign(convention)
    v = np.exp(1j * t * grid.x) * grid.multiplier(np.exp(1j * t * s * grid.wavenumbers), psi)
    return complex(np.exp(1j * s * t * t / 2) * grid.inner(phi, v))


class FKResult(NamedTuple):
    approx: complex
    exact: complex
    rel_err: float


def feynman_kac_ho(grid: Grid, m: float, omega: float, tau: float, N: int, phi, psi
                   ) -> FKResult:
    """Imaginary-time Trotter product for the harmonic oscillator.

    approx = <phi| (exp(-(tau/N) omega^2 X^2/2) exp(-(tau/N) P^2/2m))^N psi>;
    exact = <phi| exp(-tau H) psi> from the eigendecomposition of the grid H.
    """
    if tau < 0:
        raise ValueError("tau must be non-negative")
    _guard(grid, phi, psi)
    x, kap = grid.x, grid.wavenumbers
    pot = np.exp(-(tau / N) * omega ** 2 * x ** 2 / 2)
    kin = np.exp(-(tau / N) * kap ** 2 / (2 * m))
    v = np.asarray(psi, dtype=complex)
    for _ in range(N):
        v = pot * grid.multiplier(kin, v)
    approx = grid.inner(phi, v)
    energies, vecs = _ho_eigensystem(grid, float(m), float(omega))
    coef = vecs.conj().T @ np.asarray(psi, dtype=complex)
    heat_psi = vecs @ (np.exp(-tau * energies) * coef)
    exact = grid.inner(phi, heat_psi)
    return FKResult(approx, exact, abs(approx - exact) / abs(exact))


@lru_cache(maxsize=8)
def _ho_eigensystem(grid: Grid, m: float, omega: float):
    """Eigenpairs of the grid oscillator; eigh on the dense matrix, no projectors."""
    return np.linalg.eigh(hamiltonian_ho(grid, m, omega).entries)


def dirichlet_tv(n: int) -> float:
    """L1([0, 1]) norm of sum_{|k| <= n} exp(2 pi i k u) = sin((2n+1) pi u) / sin(pi u).

    Adaptive quadrature on each interval between consecutive zeros.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return 1.0
    m = 2 * n + 1

    def kernel(u):
        s = math.sin(math.pi * u)
        return float(m) if s == 0.0 else abs(math.sin(m * math.pi * u) / s)

    # symmetric about 1/2: integrate [0, 1/2] and double
    edges = [j / m for j in range(n + 1)] + [0.5]
    total = sum(quad(kernel, lo, hi, epsabs=1e-13, epsrel=1e-12)[0]
                for lo, hi in zip(edges, edges[1:]) if hi > lo)
    return 2.0 * total


def dirichlet_fit(ns):
    """Least-squares fit of dirichlet_tv(n) ~ a + b ln n; returns (a, b, r_squared, values)."""
    ns = np.asarray(ns, dtype=float)
    vals = np.array([dirichlet_tv(int(n)) for n in ns])
    b, a = np.polyfit(np.log(ns), vals, 1)
    pred = a + b * np.log(ns)
    ss_res = float(np.sum((vals - pred) ** 2))
    ss_tot = float(np.sum((vals - vals.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(a), float(b), r2, vals


def _indicator(grid: Grid, interval):
    lo, hi = interval
    if not 0.0 <= lo <= hi <= grid.length:
        raise ValueError(f"interval {interval} must lie in [0, {grid.length}]")
    x = grid.x
    return ((x >= lo) & (x < hi)).astype(float)


def truncated_bilinear_form(grid: Grid, I, J, n: int, phi=None, psi=None) -> complex:
    """<phi| 1_I Q_n 1_J psi> with Q_n the projector onto exp(2 pi i k x / L), |k| <= n.

    ``grid`` must start at 0 (``centered=False``); phi and psi default to
    the constant function 1.
    """
    if grid.centered:
        raise ValueError("use a grid on [0, L) (centered=False)")
    if n > grid.points // 4:
        raise ValueError(f"n = {n} exceeds points/4 = {grid.points // 4}")
    one = np.ones(grid.points, dtype=complex)
    phi = one if phi is None else np.asarray(phi, dtype=complex)
    psi = one if psi is None else np.asarray(psi, dtype=complex)
    modes = np.rint(grid.wavenumbers * grid.length / (2 * np.pi))
    keep = (np.abs(modes) <= n).astype(float)
    v = grid.multiplier(keep, _indicator(grid, J) * psi)
    return grid.inner(_indicator(grid, I) * phi, v)


def truncated_form_exact(I, J, n: int, length: float = 1.0) -> complex:
    """Continuum value of <1_I| Q_n 1_J> from the Fourier coefficients of both indicators."""
    def coeff(interval, k):
        lo, hi = interval
        if k == 0:
            return (hi - lo) / length
        w = 2j * np.pi * k / length
        return (np.exp(-w * lo) - np.exp(-w * hi)) / (w * length)

    return complex(length * sum(np.conj(coeff(I, k)) * coeff(J, k) for k in range(-n, n + 1)))
