"""Recover the spectral projector of sigma_z + sigma_x on [alpha, beta).

Runs the mollified window over the eps schedule (N limit inside) and the
bump window, which needs no eps limit.
"""
import argparse
import warnings

from spectralsum.altint import doubling_schedule
from spectralsum.errors import StagnationNotReached
from spectralsum.instances import SIGMA_X, SIGMA_Z
from spectralsum.linalg import eig_hermitian
from spectralsum.pvm import WindowSpec, reconstruct_projector


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, default=0.0)
    ap.add_argument("--beta", type=float, default=3.0)
    ap.add_argument("--n-max", type=int, default=256)
    args = ap.parse_args()
    A, B = eig_hermitian(SIGMA_Z), eig_hermitian(SIGMA_X)
    Ns = tuple(doubling_schedule(args.n_max))

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", StagnationNotReached)
        _, rep = reconstruct_projector(A, B, 1.0, 1.0, WindowSpec(args.alpha, args.beta, N_schedule=Ns))
    print(f"{'eps':>10} {'error at N=' + str(Ns[-1]):>16} {'N loop stable':>14}")
    for eps, study, ok in zip(rep.eps_values, rep.studies, rep.stagnated):
        print(f"{eps:10.4g} {study.errors[-1]:16.4e} {str(ok):>14}")

    _, bump = reconstruct_projector(A, B, 1.0, 1.0, WindowSpec(args.alpha, args.beta, N_schedule=Ns,
                                                               variant="bump"))
    print(f"\nbump window error at N={Ns[-1]}: {bump.final_error:.3e}")


if __name__ == "__main__":
    main()
