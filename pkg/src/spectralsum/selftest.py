"""Quick invariant suite run by ``spectralsum selftest``."""
from __future__ import annotations

import itertools

import numpy as np

from ._util import opnorm
from .altint import AlternatingIntegral
from .fourier import gaussian, window_extend
from .histories import classical_term, commutator_expansion_check, expectation, interference_term
from .instances import SIGMA_X, SIGMA_Z, builtin_pair
from .jordan import sylvester_decompose
from .linalg import eig_hermitian, spectral_residuals
from .pseudomeasure import atoms, pauli_pair, projective_consistency_check, total_variation


def _spectral():
    A, _ = builtin_pair("random:5:3")
    r = spectral_residuals(eig_hermitian(A))
    return max(v for k, v in r.items() if k != "rank_total") <= 1e-10 and r["rank_total"] == 5


def _linear_exactness():
    A, B = builtin_pair("random:4:7")
    ai = AlternatingIntegral(eig_hermitian(A), eig_hermitian(B), 1.0, -2.0)
    f = window_extend([0, 1], 1.25 * 3.0)
    return all(opnorm(ai.evaluate(f, N) - ai.target) <= 1e-11 for N in (1, 2, 4, 8))


def _commuting_exactness():
    A, B = builtin_pair("commuting")
    ai = AlternatingIntegral(eig_hermitian(A), eig_hermitian(B))
    f = gaussian()
    ref = ai.reference(f)
    return all(opnorm(ai.evaluate(f, N, "fourier") - ref) <= 1e-10 for N in (1, 4, 16))


def _routes():
    ai = AlternatingIntegral(eig_hermitian(SIGMA_Z), eig_hermitian(SIGMA_X))
    f = gaussian()
    ms = [ai.evaluate(f, 3, r) for r in ("enumeration", "sumdp", "fourier")]
    return max(opnorm(x - y) for x, y in itertools.combinations(ms, 2)) <= 1e-8


def _total_variation():
    A, B, phi, psi = pauli_pair()
    return all(abs(total_variation(atoms(A, B, phi, psi, N)) - 2.0 ** (N - 1)) <= 1e-10 * 2 ** N
               for N in range(1, 7))


def _consistency():
    A, B, phi, psi = pauli_pair()
    at = atoms(A, B, phi, psi, 4)
    return (abs(at.total() - np.vdot(phi, psi)) <= 1e-12
            and projective_consistency_check(at, 3, A, B) <= 1e-12)


def _sylvester():
    return all(sylvester_decompose(p, m - p).residual() <= 1e-10
               for m in range(1, 7) for p in range(m + 1))


def _histories():
    A, B = eig_hermitian(SIGMA_Z), eig_hermitian(SIGMA_X)
    psi = np.array([0.6, 0.8j])
    f = gaussian()
    return all(abs(classical_term(A, B, 1, 1, f, psi, N) + interference_term(A, B, 1, 1, f, psi, N)
                   - expectation(A, B, 1, 1, f, psi, N)) <= 1e-10 for N in (1, 2, 3))


def _commutators():
    A, B = eig_hermitian(SIGMA_Z), eig_hermitian(SIGMA_X)
    return all(commutator_expansion_check(A, B, lam, mu) <= 1e-12
               for N in (1, 2, 3)
               for lam in itertools.product(range(2), repeat=N)
               for mu in itertools.product(range(2), repeat=N))


CHECKS = [
    ("spectral decomposition invariants", _spectral),
    ("linear weight exact at every N", _linear_exactness),
    ("commuting pair exact at every N", _commuting_exactness),
    ("enumeration, lattice and quadrature routes agree", _routes),
    ("two-level total variation doubles per step", _total_variation),
    ("atom sum and marginal consistency", _consistency),
    ("monomial decomposition residual", _sylvester),
    ("classical plus interference equals expectation", _histories),
    ("commutator factorization of projector chains", _commutators),
]


def run_selftest(stream=None) -> bool:
    ok_all = True
    for name, check in CHECKS:
        try:
            ok = bool(check())
            detail = ""
        except Exception as exc:  # a crashing check counts as a failure
            ok, detail = False, f" ({type(exc).__name__}: {exc})"
        ok_all &= ok
        line = f"{'PASS' if ok else 'FAIL'}  {name}{detail}"
        if stream is not None:
            print(line, file=stream)
    return ok_all
