"""Imaginary-time Trotter products for the harmonic oscillator on a grid.

Compares <phi|(e^{-tau V/N} e^{-tau T/N})^N psi> against the grid heat
kernel and, for the ground state, against exp(-tau/2).
"""
import argparse
import math

from spectralsum.continuum import Grid, feynman_kac_ho, gaussian_state


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=512)
    ap.add_argument("--length", type=float, default=20.0)
    ap.add_argument("--tau", type=float, default=1.0)
    ap.add_argument("--center", type=float, default=1.0, help="displacement of the bra state")
    args = ap.parse_args()

    grid = Grid(args.points, args.length)
    g = gaussian_state(grid)
    phi = gaussian_state(grid, center=args.center)
    closed = math.exp(-args.tau / 2)
    print(f"{'N':>4} {'ground rel err':>15} {'displaced rel err':>18}")
    for N in (4, 8, 16, 32, 64, 128):
        ground = abs(feynman_kac_ho(grid, 1.0, 1.0, args.tau, N, g, g).approx - closed) / closed
        disp = feynman_kac_ho(grid, 1.0, 1.0, args.tau, N, phi, g).rel_err
        print(f"{N:4d} {ground:15.4e} {disp:18.4e}")


if __name__ == "__main__":
    main()
