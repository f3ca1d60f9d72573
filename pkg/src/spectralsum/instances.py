"""Named operator pairs for experiments and the command line."""
from __future__ import annotations

import numpy as np

from .linalg import load_matrix_json, random_hermitian

__all__ = ["SIGMA_X", "SIGMA_Y", "SIGMA_Z", "builtin_pair", "BUILTIN_NAMES", "rotated_matrices"]

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1j], [1j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

BUILTIN_NAMES = ("pauli", "rotated:EPS", "random:DIM:SEED", "commuting")


def rotated_matrices(eps: float):
    """A = sigma_z and B with eigenvectors rotated by eps from the z basis."""
    c, s = np.cos(eps), np.sin(eps)
    vp = np.array([c, s])
    vm = np.array([-s, c])
    return SIGMA_Z.copy(), (np.outer(vp, vp) - np.outer(vm, vm)).astype(complex)


def builtin_pair(name: str):
    """Resolve a builtin name to (A, B) as complex arrays.

    ``pauli``: (sigma_z, sigma_x).  ``rotated:EPS``: sigma_z against the
    eps-rotated reflection.  ``random:DIM:SEED``: two seeded random
    Hermitian matrices of unit operator norm.  ``commuting``:
    (diag(1, -1), diag(2, 3)).
    """
    head, *rest = name.split(":")
    if head == "pauli" and not rest:
        return SIGMA_Z.copy(), SIGMA_X.copy()
    if head == "commuting" and not rest:
        return np.diag([1.0, -1.0]).astype(complex), np.diag([2.0, 3.0]).astype(complex)
    if head == "rotated" and len(rest) == 1:
        return rotated_matrices(float(rest[0].removeprefix("eps=")))
    if head == "random" and len(rest) == 2:
        dim, seed = int(rest[0]), int(rest[1])
        if dim < 1:
            raise ValueError("random pair dimension must be positive")
        rng = np.random.default_rng(seed)
        return random_hermitian(dim, rng), random_hermitian(dim, rng)
    raise ValueError(f"unknown pair {name!r}; builtins are {', '.join(BUILTIN_NAMES)}")


def load_pair(pair: str | None = None, a_path=None, b_path=None):
    """Builtin by name, or A and B from matrix JSON files."""
    if a_path or b_path:
        if not (a_path and b_path):
            raise ValueError("both --A and --B files are needed")
        A, B = load_matrix_json(a_path).entries, load_matrix_json(b_path).entries
        if A.shape != B.shape:
            raise ValueError(f"A is {A.shape}, B is {B.shape}")
        return np.array(A), np.array(B)
    return builtin_pair(pair or "pauli")
