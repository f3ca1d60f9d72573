"""Total variation of the alternating pseudo-measures for two-level examples.

For the Pauli pair the variation doubles with every step; for the rotated
pair it grows by (|cos eps| + |sin eps|)^2 per step.  A commuting pair stays
bounded by |phi| |psi|.
"""
import argparse

import numpy as np

from spectralsum.linalg import eig_hermitian
from spectralsum.pseudomeasure import atoms, closed_form_tv, pauli_pair, rotated_pair, total_variation


def table(name, A, B, phi, psi, n_max, closed=None):
    print(f"\n{name}")
    print(f"{'N':>3} {'total variation':>16} {'ratio':>8} {'closed form':>12}")
    prev = None
    for N in range(1, n_max + 1):
        tv = total_variation(atoms(A, B, phi, psi, N))
        ratio = f"{tv / prev:8.4f}" if prev else " " * 8
        cf = f"{closed(N):12.6g}" if closed else ""
        print(f"{N:3d} {tv:16.8g} {ratio} {cf}")
        prev = tv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=8)
    ap.add_argument("--eps", type=float, nargs="*", default=[0.1, 0.3, np.pi / 4])
    args = ap.parse_args()

    table("Pauli pair, phi = psi = |z+>", *pauli_pair(), args.n_max, lambda N: closed_form_tv("pauli", N))
    for eps in args.eps:
        table(f"rotated pair, eps = {eps:.4g}", *rotated_pair(eps), min(args.n_max, 7),
              lambda N, e=eps: closed_form_tv("rotated", N, e))
    psi = np.array([0.6, 0.8])
    table("commuting pair diag(1,-1), diag(2,3)", eig_hermitian(np.diag([1.0, -1.0])),
          eig_hermitian(np.diag([2.0, 3.0])), psi, psi, args.n_max)


if __name__ == "__main__":
    main()
