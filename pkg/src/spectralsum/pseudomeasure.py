"""Atoms and total variation of the alternating pseudo-measures.

For unit vectors phi, psi the atoms

    nu_N(i1, j1, ..., iN, jN) = <phi| P^A_i1 P^B_j1 ... P^A_iN P^B_jN psi>

sum to <phi|psi> and marginalize consistently from N to N-1.  Their total
variation stays bounded by |phi||psi| when the projectors commute but can
grow geometrically in N otherwise, which rules out a limiting measure.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ._util import enumeration_budget, frozen, opnorm
from .altint import _pair
from .errors import BudgetExceeded, DimensionMismatch, NotCommuting
from .linalg import SpectralData, eig_hermitian

__all__ = [
    "PseudoMeasureAtoms",
    "DiagonalTable",
    "atoms",
    "total_variation",
    "rotated_pair",
    "pauli_pair",
    "projective_consistency_check",
    "commuting_diagonal_representation",
    "closed_form_tv",
    "SPARSE_CUTOFF",
]

SPARSE_CUTOFF = 1e-14
COMMUTE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class PseudoMeasureAtoms:
    """All atoms of nu_N as a dense array with axes (i1, j1, ..., iN, jN).

    :meth:`sparse` gives the map from index tuples to amplitudes with
    negligible entries dropped, in lexicographic order.
    """

    N: int
    order: str
    amplitudes: np.ndarray
    eigenvalues_A: np.ndarray
    eigenvalues_B: np.ndarray
    phi: np.ndarray
    psi: np.ndarray

    def sparse(self, cutoff: float = SPARSE_CUTOFF) -> dict:
        amps = self.amplitudes
        idx = np.argwhere(np.abs(amps) >= cutoff)  # argwhere is row-major, i.e. lexicographic
        return {tuple(int(v) for v in row): complex(amps[tuple(row)]) for row in idx}

    def total(self) -> complex:
        return complex(self.amplitudes.sum())

    def marginal(self, M: int) -> np.ndarray:
        """Sum over the trailing N - M index pairs."""
        if not 0 <= M <= self.N:
            raise ValueError(f"need 0 <= M <= N = {self.N}, got {M}")
        axes = tuple(range(2 * M, 2 * self.N))
        return self.amplitudes.sum(axis=axes) if axes else self.amplitudes

    def values(self, index: tuple) -> tuple:
        """Eigenvalue tuple (lam1, mu1, ..., lamN, muN) for an index tuple."""
        return tuple(self.eigenvalues_A[k] if n % 2 == 0 else self.eigenvalues_B[k]
                     for n, k in enumerate(index))

    def __len__(self):
        return self.amplitudes.size


def atoms(specA, specB, phi, psi, N: int, order: str = "AB", budget: int | None = None
          ) -> PseudoMeasureAtoms:
    """Every atom, built by applying projectors to psi from the right."""
    specA, specB = _pair(specA, specB)
    phi = np.asarray(phi, dtype=complex)
    psi = np.asarray(psi, dtype=complex)
    d = specA.dim
    if specB.dim != d or phi.shape != (d,) or psi.shape != (d,):
        raise DimensionMismatch(f"dims: A {d}, B {specB.dim}, phi {phi.shape}, psi {psi.shape}")
    if order not in ("AB", "BA"):
        raise ValueError(f"order must be 'AB' or 'BA', got {order!r}")
    if N < 1:
        raise ValueError("N must be positive")
    nA, nB = specA.size, specB.size
    count = (nA * nB) ** N
    budget = enumeration_budget(budget)
    if count > budget:
        raise BudgetExceeded(f"{count} atoms exceed budget {budget}")
    PA, PB = specA.projectors, specB.projectors
    V = psi
    for _ in range(N):
        if order == "AB":
            W = np.einsum("bij,...j->b...i", PB, V)
            V = np.einsum("aij,...j->a...i", PA, W)
        else:
            W = np.einsum("aij,...j->a...i", PA, V)
            V = np.einsum("bij,a...j->ab...i", PB, W)
    amps = V @ phi.conj()
    return PseudoMeasureAtoms(N, order, frozen(amps), specA.eigenvalues, specB.eigenvalues,
                              frozen(phi), frozen(psi))


def total_variation(at: PseudoMeasureAtoms) -> float:
    """Sum of |amplitude| over all atoms."""
    return float(np.abs(at.amplitudes).sum())


def projective_consistency_check(at: PseudoMeasureAtoms, M: int, specA=None, specB=None) -> float:
    """Max difference between the marginal of nu_N and a directly computed nu_M.

    The atoms store eigenvalues but not projectors, so the spectral data
    used to build them must be passed again.
    """
    if specA is None or specB is None:
        raise ValueError("pass specA and specB to rebuild the direct table")
    if M == at.N:
        direct = at.amplitudes
    elif M == 0:
        direct = np.vdot(at.phi, at.psi)
    else:
        direct = atoms(specA, specB, at.phi, at.psi, M, at.order).amplitudes
    return float(np.max(np.abs(at.marginal(M) - direct)))


@dataclass(frozen=True)
class DiagonalTable:
    """Joint table <phi| P^A_i P^B_j psi> keyed by eigenvalue pairs."""

    table: dict
    offdiagonal: float

    def is_probability(self, tol: float = 1e-12) -> bool:
        vals = np.array(list(self.table.values()))
        return bool(np.all(np.abs(vals.imag) <= tol) and np.all(vals.real >= -tol)
                    and abs(vals.sum() - 1) <= tol)


def commuting_diagonal_representation(at: PseudoMeasureAtoms, specA, specB,
                                      tol: float = COMMUTE_TOL) -> DiagonalTable:
    """For commuting PVMs, check that only repeated-pair atoms survive.

    Returns the N = 1 table on the diagonal tuples (lam, mu, lam, mu, ...).
    """
    specA, specB = _pair(specA, specB)
    worst = max(opnorm(P @ Q - Q @ P) for P in specA.projectors for Q in specB.projectors)
    if worst > tol:
        raise NotCommuting(f"projector commutator norm {worst:.2e} exceeds {tol:g}")
    nA, nB = specA.size, specB.size
    amps = at.amplitudes
    mask = np.ones(amps.shape, dtype=bool)
    table = {}
    for i, j in itertools.product(range(nA), range(nB)):
        idx = (i, j) * at.N
        mask[idx] = False
        table[(float(specA.eigenvalues[i]), float(specB.eigenvalues[j]))] = complex(amps[idx])
    off = float(np.max(np.abs(amps[mask]))) if mask.any() else 0.0
    return DiagonalTable(table, off)


def pauli_pair():
    """(sigma_z, sigma_x) spectral data with phi = psi = |z+>."""
    sz = np.diag([1.0, -1.0])
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    e = np.array([1.0, 0.0])
    return eig_hermitian(sz), eig_hermitian(sx), e, e


def rotated_pair(eps: float):
    """Two-level instance whose B-eigenbasis is rotated by eps.

    A has eigenvectors |z+>, |z->; B has |v+> = (cos eps, sin eps) and
    |v-> = (-sin eps, cos eps), eigenvalues +1 and -1 for both.  The
    states are the balanced superpositions phi = (|z+> + |z->)/sqrt 2 and
    psi = (|v+> + |v->)/sqrt 2.
    """
    c, s = np.cos(eps), np.sin(eps)
    vp = np.array([c, s])
    vm = np.array([-s, c])
    A = np.diag([1.0, -1.0])
    B = np.outer(vp, vp) - np.outer(vm, vm)
    phi = np.array([1.0, 1.0]) / np.sqrt(2)
    psi = (vp + vm) / np.sqrt(2)
    return eig_hermitian(A), eig_hermitian(B), phi, psi


def closed_form_tv(example: str, N: int, eps: float = 0.0) -> float:
    """Closed-form total variation for the two-level examples, as usually stated.

    ``pauli``: sqrt 2 * 2^(N-2) (|a+| + |a-|)(|b+| + |b-|) with a = (1, 0)
    and b = (1, 1)/sqrt 2, i.e. 2^(N-1).  ``rotated``:
    (|cos eps| + |sin eps|)^(2N-1) / 2.  Enumeration of the rotated
    instance gives twice this value: the sum over the first index is a
    factor 2 the formula omits.  The per-step growth ratio agrees.
    """
    if example == "pauli":
        alpha = (1.0, 0.0)
        beta = (1 / np.sqrt(2), 1 / np.sqrt(2))
        return float(np.sqrt(2) * 2.0 ** (N - 2) * (abs(alpha[0]) + abs(alpha[1]))
                     * (abs(beta[0]) + abs(beta[1])))
    if example == "rotated":
        return float(0.5 * (abs(np.cos(eps)) + abs(np.sin(eps))) ** (2 * N - 1))
    raise ValueError(f"no closed form for example {example!r}")
