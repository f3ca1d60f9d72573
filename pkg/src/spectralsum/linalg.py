"""Hermitian matrices, their projection-valued measures and spectral calculus.

Every other module consumes :class:`SpectralData`: the eigenvalues of a
Hermitian matrix grouped into distinct values, each with the orthogonal
projector onto its eigenspace.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from ._util import frozen, opnorm
from .errors import DimensionMismatch, EigFailure, NotHermitian

HERMITICITY_TOL = 1e-12
GROUP_TOL = 1e-9

__all__ = [
    "HermitianMatrix",
    "SpectralData",
    "eig_hermitian",
    "apply_function",
    "pvm_pushforward",
    "unitary_exp",
    "random_hermitian",
    "load_matrix_json",
    "dump_matrix_json",
    "matrix_to_json",
    "matrix_from_json",
    "spectral_residuals",
]


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    """Dense complex square matrix certified Hermitian within tolerance."""

    entries: np.ndarray
    hermiticity_tol: float = HERMITICITY_TOL

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise DimensionMismatch(f"expected a non-empty square matrix, got shape {m.shape}")
        norm = opnorm(m)
        defect = opnorm(m - m.conj().T)
        if defect > self.hermiticity_tol * max(norm, np.finfo(float).tiny):
            if not (norm == 0.0 and defect == 0.0):
                raise NotHermitian(f"||M - M^H|| = {defect:.3e} exceeds {self.hermiticity_tol:g} * ||M||")
        object.__setattr__(self, "entries", frozen(m))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def norm(self) -> float:
        return opnorm(self.entries)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    @classmethod
    def coerce(cls, m, tol=HERMITICITY_TOL) -> "HermitianMatrix":
        if isinstance(m, HermitianMatrix):
            return m
        return cls(np.asarray(m, dtype=complex), tol)


@dataclass(frozen=True, eq=False)
class SpectralData:
    """Distinct eigenvalues (ascending) and their eigenprojectors."""

    source: HermitianMatrix
    eigenvalues: np.ndarray
    projectors: np.ndarray  # shape (n_eig, dim, dim)
    group_tol: float = GROUP_TOL
    ranks: tuple = field(default=())

    @property
    def dim(self) -> int:
        return self.source.dim

    @property
    def size(self) -> int:
        return len(self.eigenvalues)

    @property
    def matrix(self) -> np.ndarray:
        return self.source.entries

    @property
    def norm(self) -> float:
        """Operator norm, read off the spectrum."""
        return float(np.max(np.abs(self.eigenvalues)))

    def __iter__(self):
        return iter(zip(self.eigenvalues, self.projectors))


def _as_matrix(M):
    return HermitianMatrix.coerce(M)


def eig_hermitian(M, group_tol: float = GROUP_TOL) -> SpectralData:
    """Spectral decomposition with near-degenerate eigenvalues merged.

    Raw eigenvalues closer than ``group_tol * max(1, ||M||)`` to their
    neighbour are merged into one cluster; its eigenvalue is the cluster
    mean and its projector the sum of the rank-one projectors.
    """
    H = _as_matrix(M)
    m = H.entries
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - backend failure
        raise EigFailure(str(exc)) from exc
    if not np.all(np.isfinite(w)):
        raise EigFailure("non-finite eigenvalues")
    scale = group_tol * max(1.0, float(np.max(np.abs(w))))
    clusters = [[0]]
    for i in range(1, len(w)):
        if w[i] - w[i - 1] <= scale:
            clusters[-1].append(i)
        else:
            clusters.append([i])
    values = np.array([w[c].mean() for c in clusters])
    projs = np.empty((len(clusters), H.dim, H.dim), dtype=complex)
    for k, c in enumerate(clusters):
        vc = v[:, c]
        p = vc @ vc.conj().T
        projs[k] = 0.5 * (p + p.conj().T)
    return SpectralData(
        source=H,
        eigenvalues=frozen(values, float),
        projectors=frozen(projs),
        group_tol=group_tol,
        ranks=tuple(len(c) for c in clusters),
    )


def _evaluate(f, xs):
    """Evaluate a scalar map on each eigenvalue; works for scalar-only callables."""
    try:
        out = np.asarray(f(np.asarray(xs)), dtype=complex)
        if out.shape == np.shape(xs):
            return out
    except Exception:
        pass
    return np.array([complex(f(float(x))) for x in xs])


def apply_function(spec: SpectralData, f: Callable) -> np.ndarray:
    """sum_tau f(tau) P_tau."""
    vals = _evaluate(f, spec.eigenvalues)
    return np.einsum("k,kij->ij", vals, spec.projectors)


def pvm_pushforward(spec: SpectralData, h: Callable) -> SpectralData:
    """The spectral data of h(T), obtained without a new eigensolve.

    Values h(tau) that collide within the grouping tolerance are merged
    and their projectors summed.
    """
    hv = np.real_if_close(_evaluate(h, spec.eigenvalues))
    if np.iscomplexobj(hv):
        raise ValueError("h must be real-valued on the spectrum")
    hv = np.asarray(hv, dtype=float)
    order = np.argsort(hv, kind="stable")
    scale = spec.group_tol * max(1.0, float(np.max(np.abs(hv))))
    groups = [[order[0]]]
    for i in order[1:]:
        if hv[i] - hv[groups[-1][-1]] <= scale:
            groups[-1].append(i)
        else:
            groups.append([i])
    values = np.array([hv[g].mean() for g in groups])
    projs = np.array([spec.projectors[g].sum(axis=0) for g in groups])
    ranks = tuple(sum(spec.ranks[i] for i in g) for g in groups) if spec.ranks else ()
    mat = np.einsum("k,kij->ij", values, projs)
    source = HermitianMatrix(0.5 * (mat + mat.conj().T), hermiticity_tol=1e-9)
    return SpectralData(source, frozen(values, float), frozen(projs), spec.group_tol, ranks)


def unitary_exp(spec: SpectralData, t: float) -> np.ndarray:
    """exp(i t T) by spectral calculus."""
    return np.einsum("k,kij->ij", np.exp(1j * t * spec.eigenvalues), spec.projectors)


def spectral_residuals(spec: SpectralData) -> dict:
    """Defects of every SpectralData invariant, in operator norm."""
    P = spec.projectors
    eye = np.eye(spec.dim)
    idem = max(opnorm(p @ p - p) for p in P)
    herm = max(opnorm(p - p.conj().T) for p in P)
    orth = 0.0
    for i in range(len(P)):
        for j in range(len(P)):
            if i != j:
                orth = max(orth, opnorm(P[i] @ P[j]))
    complete = opnorm(P.sum(axis=0) - eye)
    recon = opnorm(np.einsum("k,kij->ij", spec.eigenvalues, P) - spec.matrix)
    rank_total = int(sum(int(round(np.trace(p).real)) for p in P))
    return {
        "idempotence": idem,
        "hermiticity": herm,
        "orthogonality": orth,
        "completeness": complete,
        "reconstruction": recon,
        "rank_total": rank_total,
    }


def random_hermitian(dim: int, rng: np.random.Generator, norm: float | None = 1.0) -> np.ndarray:
    """Random GUE-like Hermitian matrix, rescaled to the given operator norm."""
    x = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = 0.5 * (x + x.conj().T)
    if norm is not None:
        h *= norm / opnorm(h)
    return h


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    return {"dim": int(m.shape[0]), "re": m.real.tolist(), "im": m.imag.tolist()}


def matrix_from_json(obj: dict) -> np.ndarray:
    """Parse the {"dim", "re", "im"} matrix format; ragged arrays are rejected."""
    try:
        dim = int(obj["dim"])
        re_rows = obj["re"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed matrix object: {exc}") from exc
    im_rows = obj.get("im")
    if im_rows is None:
        im_rows = [[0.0] * dim for _ in range(dim)]
    for name, rows in (("re", re_rows), ("im", im_rows)):
        if not isinstance(rows, list) or len(rows) != dim:
            raise ValueError(f"'{name}' must have {dim} rows")
        for r, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != dim:
                raise ValueError(f"'{name}' row {r} is ragged (expected {dim} entries)")
    return np.array(re_rows, dtype=float) + 1j * np.array(im_rows, dtype=float)


def load_matrix_json(path) -> HermitianMatrix:
    with open(Path(path)) as fh:
        return HermitianMatrix(matrix_from_json(json.load(fh)))


def dump_matrix_json(m, path) -> None:
    with open(Path(path), "w") as fh:
        json.dump(matrix_to_json(m), fh, indent=1)
