"""Convergence of F_N(f) to f(sigma_z + sigma_x) for a Gaussian weight.

Prints N, the operator-norm error, and the local order between successive N.
"""
import argparse
import math

from spectralsum.altint import converge_study, doubling_schedule
from spectralsum.fourier import gaussian
from spectralsum.instances import SIGMA_X, SIGMA_Z
from spectralsum.linalg import eig_hermitian


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=256)
    ap.add_argument("--width", type=float, default=1.0)
    ap.add_argument("--route", default="fourier")
    args = ap.parse_args()

    rep = converge_study(eig_hermitian(SIGMA_Z), eig_hermitian(SIGMA_X), 1.0, 1.0,
                         gaussian(width=args.width), doubling_schedule(args.n_max), route=args.route)
    print(f"{'N':>5} {'error':>12} {'local order':>12}")
    prev = None
    for N, err in rep.rows():
        local = "" if prev is None else f"{-math.log(err / prev[1]) / math.log(N / prev[0]):12.4f}"
        print(f"{N:5d} {err:12.4e} {local}")
        prev = (N, err)
    print(f"fitted order on the last half: {rep.empirical_order:.4f}")


if __name__ == "__main__":
    main()
