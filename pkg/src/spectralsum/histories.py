"""Measurement histories behind the alternating integral.

Reading P^A_lam1 P^B_mu1 ... P^A_lamN P^B_muN psi from the right, B is
measured first, then A, alternately N times; the squared norm of the
projected vector is the probability of the outcome sequence
(mu_N, lam_N, ..., mu_1, lam_1) under the Lueders update rule.  The
expectation <psi|F_N(f) psi> splits into a classical average of f over
these histories plus cross terms between distinct histories.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ._util import enumeration_budget, opnorm
from .altint import _pair
from .errors import BudgetExceeded, DimensionMismatch
from .linalg import _evaluate

__all__ = [
    "HistoryRecord",
    "history_probability",
    "history_distribution",
    "sample_history",
    "sample_histories",
    "classical_term",
    "interference_term",
    "interference_direct",
    "expectation",
    "commutator_expansion_check",
    "empirical_tv_distance",
]

DIRECT_MAX_N = 3


@dataclass(frozen=True, eq=False)
class HistoryRecord:
    """One sampled history.

    ``outcomes`` lists eigenvalues in measurement order, B first:
    (mu_N, lam_N, ..., mu_1, lam_1).  ``indices`` holds the matching
    positions in the ascending eigenvalue lists.
    """

    outcomes: tuple
    indices: tuple
    probability: float
    post_state: np.ndarray


def _check_state(spec, psi):
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (spec.dim,):
        raise DimensionMismatch(f"state of shape {psi.shape} for dimension {spec.dim}")
    return psi


def _measurement_sequence(specA, specB, N, first):
    """Spectral data in the order the measurements happen."""
    if first not in ("A", "B"):
        raise ValueError(f"first must be 'A' or 'B', got {first!r}")
    pair = (specB, specA) if first == "B" else (specA, specB)
    return [pair[k % 2] for k in range(2 * N)]


def _index_of(spec, value):
    diffs = np.abs(spec.eigenvalues - value)
    k = int(np.argmin(diffs))
    if diffs[k] > 1e-9 * max(1.0, spec.norm):
        raise ValueError(f"{value!r} is not an eigenvalue (spectrum {spec.eigenvalues})")
    return k


def history_probability(specA, specB, psi, outcomes, first: str = "B") -> float:
    """Squared norm of the projected state for outcomes in measurement order."""
    specA, specB = _pair(specA, specB)
    psi = _check_state(specA, psi)
    if len(outcomes) % 2:
        raise DimensionMismatch("outcome sequence must have even length 2N")
    seq = _measurement_sequence(specA, specB, len(outcomes) // 2, first)
    v = psi
    for spec, val in zip(seq, outcomes):
        v = spec.projectors[_index_of(spec, val)] @ v
    return float(np.vdot(v, v).real)


def history_distribution(specA, specB, psi, N: int, first: str = "B",
                         budget: int | None = None) -> dict:
    """{index tuple in measurement order: probability} over the full outcome space."""
    specA, specB = _pair(specA, specB)
    psi = _check_state(specA, psi)
    seq = _measurement_sequence(specA, specB, N, first)
    size = int(np.prod([s.size for s in seq]))
    budget = enumeration_budget(budget)
    if size > budget:
        raise BudgetExceeded(f"{size} histories exceed budget {budget}")
    V = psi[None]
    for spec in seq:
        V = np.einsum("kij,hj->hki", spec.projectors, V).reshape(-1, spec.dim)
    probs = np.einsum("hi,hi->h", V.conj(), V).real
    keys = itertools.product(*(range(s.size) for s in seq))
    return dict(zip(keys, probs))


def _uniforms(seed: int, samples: int, width: int, start: int = 0) -> np.ndarray:
    """Row i depends only on (seed, start + i): one Philox stream read row by row."""
    rng = np.random.Generator(np.random.Philox(seed))
    skip = start * width
    while skip:
        chunk = min(skip, 1 << 20)
        rng.random(chunk)
        skip -= chunk
    return rng.random((samples, width))


def sample_histories(specA, specB, psi, N: int, samples: int, seed: int, first: str = "B",
                     start: int = 0):
    """Vectorized Born-Lueders sampling.

    Returns
    -------
    indices : ndarray of int, shape (samples, 2N)
        Eigenvalue positions in measurement order.
    probabilities : ndarray, shape (samples,)
        Probability of each drawn history.
    states : ndarray, shape (samples, dim)
        Normalized post-measurement states.
    """
    specA, specB = _pair(specA, specB)
    psi = _check_state(specA, psi)
    norm = np.linalg.norm(psi)
    if not np.isclose(norm, 1.0, atol=1e-10):
        raise ValueError(f"state must be normalized, |psi| = {norm}")
    seq = _measurement_sequence(specA, specB, N, first)
    u = _uniforms(seed, samples, 2 * N, start)
    v = np.broadcast_to(psi, (samples, specA.dim)).copy()
    prob = np.ones(samples)
    idx = np.empty((samples, 2 * N), dtype=int)
    rows = np.arange(samples)
    for step, spec in enumerate(seq):
        proj = np.einsum("kij,sj->ski", spec.projectors, v)  # (samples, n, dim)
        p = np.einsum("ski,ski->sk", proj.conj(), proj).real
        p[p < 1e-15] = 0.0  # zero-probability branches can never be drawn
        cum = np.cumsum(p, axis=1)
        total = cum[:, -1]
        k = np.sum(cum <= (u[:, step] * total)[:, None], axis=1)
        last_pos = p.shape[1] - 1 - np.argmax(p[:, ::-1] > 0, axis=1)
        k = np.minimum(k, last_pos)
        pk = p[rows, k] / total
        v = proj[rows, k] / np.sqrt(p[rows, k])[:, None]
        prob *= pk
        idx[:, step] = k
    return idx, prob, v


def sample_history(specA, specB, psi, N: int, seed: int, index: int = 0,
                   first: str = "B") -> HistoryRecord:
    """Draw history number ``index`` of the stream defined by ``seed``."""
    specA, specB = _pair(specA, specB)
    idx, prob, states = sample_histories(specA, specB, psi, N, 1, seed, first, start=index)
    seq = _measurement_sequence(specA, specB, N, first)
    ks = tuple(int(k) for k in idx[0])
    outcomes = tuple(float(s.eigenvalues[k]) for s, k in zip(seq, ks))
    return HistoryRecord(outcomes, ks, float(prob[0]), states[0])


def empirical_tv_distance(exact: dict, indices: np.ndarray) -> float:
    """Total-variation distance between sampled index rows and an exact distribution."""
    keys, counts = np.unique(indices, axis=0, return_counts=True)
    freq = {tuple(int(v) for v in k): c / len(indices) for k, c in zip(keys, counts)}
    support = set(exact) | set(freq)
    return 0.5 * sum(abs(exact.get(k, 0.0) - freq.get(k, 0.0)) for k in support)


# -- expectation decomposition ------------------------------------------------


def _history_vectors(specA, specB, a, b, f, psi, N, budget):
    """Projected vectors P^A P^B ... psi for every tuple, and the weight of each."""
    specA, specB = _pair(specA, specB)
    psi = _check_state(specA, psi)
    nA, nB = specA.size, specB.size
    count = (nA * nB) ** N
    budget = enumeration_budget(budget)
    if count > budget:
        raise BudgetExceeded(f"{count} tuples exceed budget {budget}")
    V = psi
    S = np.zeros(())
    vals = a * specA.eigenvalues[:, None] + b * specB.eigenvalues[None, :]
    for _ in range(N):
        V = np.einsum("bij,...j->b...i", specB.projectors, V)
        V = np.einsum("aij,...j->a...i", specA.projectors, V)
        S = vals.reshape(vals.shape + (1,) * S.ndim) + S[None, None]
    V = V.reshape(-1, specA.dim)
    w = _evaluate(f, (S / N).reshape(-1))
    return V, w, psi


def classical_term(specA, specB, a, b, f, psi, N: int, budget=None) -> complex:
    """sum over histories of f(average) times the history probability."""
    V, w, _ = _history_vectors(specA, specB, a, b, f, psi, N, budget)
    probs = np.einsum("hi,hi->h", V.conj(), V).real
    val = complex(np.sum(w * probs))
    return val.real if val.imag == 0 else val


def expectation(specA, specB, a, b, f, psi, N: int, budget=None) -> complex:
    """<psi| F_N(f) psi>."""
    V, w, psi = _history_vectors(specA, specB, a, b, f, psi, N, budget)
    return complex(np.sum(w * (V @ psi.conj())))


def interference_term(specA, specB, a, b, f, psi, N: int, budget=None) -> complex:
    """<psi| F_N(f) psi> minus the classical term."""
    V, w, psi = _history_vectors(specA, specB, a, b, f, psi, N, budget)
    total = np.sum(w * (V @ psi.conj()))
    classical = np.sum(w * np.einsum("hi,hi->h", V.conj(), V).real)
    return complex(total - classical)


def interference_direct(specA, specB, a, b, f, psi, N: int) -> complex:
    """Cross terms f(t) <V_t'|V_t> over distinct history pairs t' != t.

    Uses psi = sum_t' V_t' (completeness), so the cross inner products of
    distinct projected vectors carry all of the interference.
    """
    if N > DIRECT_MAX_N:
        raise BudgetExceeded(f"direct cross-term enumeration limited to N <= {DIRECT_MAX_N}")
    V, w, _ = _history_vectors(specA, specB, a, b, f, psi, N, None)
    gram = V.conj() @ V.T  # gram[t', t] = <V_t'|V_t>
    cross = gram.sum(axis=0) - np.diag(gram)
    return complex(np.sum(w * cross))


# -- commutator expansion -----------------------------------------------------


def commutator_expansion_check(specA, specB, lam_idx, mu_idx) -> float:
    """Residual of the alternating product against its commutator factorization.

    With C = [P^A_lam, P^B_mu], the product P^A_lam1 P^B_mu1 ... P^A_lamN P^B_muN
    equals prod_l (delta(lam_l, lam_l+1) P^B_mu_l + C_lam_l,mu_l) with the last
    factor P^B_muN P^A_lamN + C_lamN,muN.
    """
    specA, specB = _pair(specA, specB)
    lam_idx, mu_idx = tuple(lam_idx), tuple(mu_idx)
    if len(lam_idx) != len(mu_idx) or not lam_idx:
        raise DimensionMismatch("index tuples must be nonempty and of equal length")
    N = len(lam_idx)
    PA, PB = specA.projectors, specB.projectors
    eye = np.eye(specA.dim, dtype=complex)
    direct = eye
    for i, j in zip(lam_idx, mu_idx):
        direct = direct @ PA[i] @ PB[j]
    expanded = eye
    for ell, (i, j) in enumerate(zip(lam_idx, mu_idx)):
        C = PA[i] @ PB[j] - PB[j] @ PA[i]
        if ell < N - 1:
            factor = (PB[j] if i == lam_idx[ell + 1] else 0 * eye) + C
        else:
            factor = PB[j] @ PA[i] + C
        expanded = expanded @ factor
    return opnorm(direct - expanded)
