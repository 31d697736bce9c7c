"""Surface potential, Ricci scalar and the quantization gap around a torus.

Shows that xi hbar^2 R / M - V_s varies with the poloidal angle for every xi,
so no choice of ordering parameter reconciles the two quantizations.
"""
import argparse
import math

import numpy as np

from curvprobe.geometry import Torus, quantization_gap, ricci_scalar, surface_potential


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--r", type=float, default=1.0)
    ap.add_argument("--R", type=float, default=3.0)
    ap.add_argument("--xi", type=float, nargs="+", default=[-1.0, 0.0, 1.0 / 6.0, 1.0])
    ap.add_argument("--points", type=int, default=9)
    args = ap.parse_args()

    tor = Torus(args.r, args.R)
    thetas = np.linspace(0.0, math.pi, args.points)
    head = f"{'theta':>7} {'V_s':>11} {'Ricci':>11}" + "".join(f" {'gap xi=' + format(x, '.3g'):>13}" for x in args.xi)
    print(head)
    for th in thetas:
        p = (th, 0.0)
        line = f"{th:>7.4f} {surface_potential(tor, p):>11.6f} {ricci_scalar(tor, p):>11.6f}"
        line += "".join(f" {quantization_gap(tor, p, xi):>13.6f}" for xi in args.xi)
        print(line)


if __name__ == "__main__":
    main()
