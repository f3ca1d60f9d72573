"""Spectral projectors of aA + bB recovered from the spectral data of A and B.

The projector onto [alpha, beta) is the double limit, first N -> infinity
and then eps -> 0+, of F_N applied to a smoothed window indicator.  A bump
window vanishing on the spectrum outside [alpha, beta) removes the eps
limit altogether.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from ._util import opnorm
from .altint import AlternatingIntegral, ConvergenceReport, _pair, converge_study, doubling_schedule
from .errors import BoundaryTouchesSpectrum, DimensionMismatch, StagnationNotReached
from .fourier import (
    FourierFunction,
    QuadConfig,
    atom_mollifier_eval,
    fourier_measure,
    mollifier_eval,
)
from .linalg import SpectralData, eig_hermitian, unitary_exp

__all__ = [
    "WindowSpec",
    "PVMReport",
    "mollifier_eval",
    "atom_mollifier_eval",
    "bump_window",
    "bump_margin",
    "reconstruct_projector",
    "exact_projector",
    "ft_spectral_measure",
    "DEFAULT_EPS_SCHEDULE",
    "STAGNATION_TOL",
]

DEFAULT_EPS_SCHEDULE = tuple(4.0 ** -k for k in range(6))
STAGNATION_TOL = 1e-3
VARIANTS = ("mollifier", "atom", "bump")


@dataclass(frozen=True)
class WindowSpec:
    """Target set and limit schedules for a projector reconstruction.

    ``beta`` is ignored for the atom variant, which targets the single
    point ``alpha``.  The bump variant ignores ``eps_schedule``.
    """

    alpha: float
    beta: float | None = None
    eps_schedule: tuple = DEFAULT_EPS_SCHEDULE
    N_schedule: tuple = tuple(doubling_schedule(256))
    variant: str = "mollifier"

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.variant != "atom":
            if self.beta is None or not self.alpha < self.beta:
                raise ValueError(f"need alpha < beta, got [{self.alpha}, {self.beta})")
        if not self.N_schedule or any(b <= a for a, b in zip(self.N_schedule, self.N_schedule[1:])):
            raise ValueError("N_schedule must be nonempty and strictly increasing")
        if any(int(n) < 1 for n in self.N_schedule):
            raise ValueError("N values must be positive")
        if self.variant != "bump":
            eps = list(self.eps_schedule)
            if not eps or any(e <= 0 for e in eps):
                raise ValueError("eps_schedule must be nonempty with positive entries")
            if any(e2 >= e1 for e1, e2 in zip(eps, eps[1:])):
                raise ValueError("eps_schedule must be decreasing")


@dataclass(frozen=True, eq=False)
class PVMReport:
    """Per-eps convergence reports plus the flattened (eps, N, error, stagnated) table."""

    window: WindowSpec
    exact: np.ndarray
    studies: tuple  # one ConvergenceReport per eps (a single one for bump)
    eps_values: tuple
    limits: tuple  # N-limit estimate per eps
    stagnated: tuple  # bool per eps
    boundary_defect: float = 0.0
    table: list = field(default_factory=list)

    @property
    def final_error(self) -> float:
        return opnorm(self.limits[-1] - self.exact)


def bump_margin(alpha: float, beta: float, spectrum) -> float:
    """Half the smallest distance from a spectrum point to a window edge."""
    s = np.asarray(spectrum, dtype=float)
    gaps = np.concatenate([np.abs(s - alpha), np.abs(s - beta)])
    scale = max(1.0, float(np.max(np.abs(s)))) if s.size else 1.0
    if gaps.size and gaps.min() <= 1e-9 * scale:
        raise BoundaryTouchesSpectrum(
            f"spectrum point within {gaps.min():.2e} of the window [{alpha}, {beta})")
    margin = 0.5 * float(gaps.min()) if gaps.size else np.inf
    return min(margin, 0.25 * (beta - alpha))


def bump_window(alpha: float, beta: float, spectrum, **kw) -> FourierFunction:
    """Smooth plateau: 1 on [alpha, beta - margin], 0 on spectrum points outside [alpha, beta)."""
    margin = bump_margin(alpha, beta, spectrum)
    return fourier_measure("bump_window", alpha=alpha, beta=beta, margin=margin, **kw)


def exact_projector(specA, specB, a, b, alpha, beta=None) -> np.ndarray:
    """Spectral projector of aA + bB onto [alpha, beta), or onto {alpha} when beta is None."""
    specA, specB = _pair(specA, specB)
    spec = eig_hermitian(a * specA.matrix + b * specB.matrix)
    if beta is None:
        tol = spec.group_tol * max(1.0, spec.norm)
        mask = np.abs(spec.eigenvalues - alpha) <= tol
    else:
        if not alpha < beta:
            raise ValueError("need alpha < beta")
        mask = (spec.eigenvalues >= alpha) & (spec.eigenvalues < beta)
    return spec.projectors[mask].sum(axis=0) if mask.any() else np.zeros((spec.dim, spec.dim), complex)


def _boundary_defect(spectrum, window: WindowSpec) -> float:
    if window.variant == "atom":
        return 0.0
    s = np.asarray(spectrum)
    scale = 1e-9 * max(1.0, float(np.max(np.abs(s))))
    hits = np.abs(s - window.beta) <= scale
    return float(np.sum(hits))


def reconstruct_projector(specA, specB, a, b, window: WindowSpec, route: str = "auto",
                          quad: QuadConfig | None = None, order: str = "AB"):
    """Estimate the spectral projector of aA + bB for the window.

    For every eps (inner limit first) the mollified window is pushed
    through F_N along ``window.N_schedule``; the largest N gives that
    eps's N-limit.  The estimate is the N-limit at the smallest eps.

    Returns
    -------
    estimate : ndarray
    report : PVMReport
    """
    specA, specB = _pair(specA, specB)
    engine = AlternatingIntegral(specA, specB, a, b, order)
    spectrum = eig_hermitian(engine.target).eigenvalues
    exact = exact_projector(specA, specB, a, b, window.alpha,
                            None if window.variant == "atom" else window.beta)
    defect = _boundary_defect(spectrum, window)
    if defect:
        warnings.warn(
            f"window edge beta={window.beta} lies on the spectrum; the limit need not "
            "equal the half-open projector", RuntimeWarning, stacklevel=2)

    if window.variant == "bump":
        funcs = [(float("nan"), bump_window(window.alpha, window.beta, spectrum))]
    elif window.variant == "atom":
        funcs = [(e, fourier_measure("atom_mollifier", alpha=window.alpha, eps=e))
                 for e in window.eps_schedule]
    else:
        funcs = [(e, fourier_measure("mollifier_window", alpha=window.alpha,
                                     beta=window.beta, eps=e))
                 for e in window.eps_schedule]

    studies, limits, stagnated, table = [], [], [], []
    for eps, f in funcs:
        rep = converge_study(specA, specB, a, b, f, window.N_schedule, route=route, quad=quad,
                             order=order, reference=exact, engine=engine)
        est = rep.estimates
        changes = [opnorm(y - x) for x, y in zip(est, est[1:])]
        ok = any(c1 < STAGNATION_TOL and c2 < STAGNATION_TOL for c1, c2 in zip(changes, changes[1:]))
        if not ok:
            warnings.warn(
                f"eps={eps:g}: N loop did not stabilise to {STAGNATION_TOL:g} by N={window.N_schedule[-1]}",
                StagnationNotReached, stacklevel=2)
        studies.append(rep)
        limits.append(est[-1])
        stagnated.append(ok)
        table.extend((eps, N, float(e), ok) for N, e in rep.rows())
    report = PVMReport(window, exact, tuple(studies), tuple(e for e, _ in funcs), tuple(limits),
                       tuple(stagnated), defect, table)
    return limits[-1], report


def ft_spectral_measure(spec: SpectralData, phi, psi, t: float) -> complex:
    """Fourier transform of the spectral measure: <phi| exp(i t T) psi>."""
    phi = np.asarray(phi, dtype=complex)
    psi = np.asarray(psi, dtype=complex)
    if phi.shape != (spec.dim,) or psi.shape != (spec.dim,):
        raise DimensionMismatch(f"vectors of shape {phi.shape}, {psi.shape} for dim {spec.dim}")
    return complex(np.vdot(phi, unitary_exp(spec, t) @ psi))
