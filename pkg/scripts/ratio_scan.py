"""Scan R = F/H over the mixing angle for the (cos g|00> + sin g|j0>) probe.

Prints, for each (j, t, lam), the best ratio over gamma and the dimensionless
phase tau = t j(j+1) / (2 lam^2) that R actually depends on.

    python scripts/ratio_scan.py --n-gamma 200 --out ratio.csv
"""
import argparse
import csv
import math

import numpy as np

from curvprobe.estimation import fi_qfi_ratio
from curvprobe.probe import lambda_derivative, two_level
from curvprobe.spectral import sphere_quadrature


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-gamma", type=int, default=25)
    ap.add_argument("--j", type=int, nargs="+", default=[1, 2])
    ap.add_argument("--t", type=float, nargs="+", default=[10.0, 100.0])
    ap.add_argument("--lam", type=float, nargs="+", default=[0.1, 1.0, 10.0])
    ap.add_argument("--n-theta", type=int, default=800)
    ap.add_argument("--out")
    args = ap.parse_args()

    gammas = (math.pi / 2) * (np.arange(args.n_gamma) + 0.5) / args.n_gamma
    grid = sphere_quadrature(max(args.j), n_theta=args.n_theta, n_phi=16)
    rows = []
    print(f"{'j':>2} {'t':>7} {'lam':>6} {'tau':>10} {'max R':>8} {'at gamma':>9}")
    for j in args.j:
        for t in args.t:
            for lam in args.lam:
                ratios = [fi_qfi_ratio(lambda_derivative(two_level(j, alpha=g), t, lam), grid).value for g in gammas]
                rows += [(j, t, lam, g, r) for g, r in zip(gammas, ratios)]
                i = int(np.argmax(ratios))
                tau = t * j * (j + 1) / (2 * lam**2)
                print(f"{j:>2} {t:>7g} {lam:>6g} {tau:>10.4g} {ratios[i]:>8.4f} {gammas[i]:>9.4f}")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["j", "t", "lam", "gamma", "ratio"])
            w.writerows([(j, t, lam, f"{g:.15e}", f"{r:.15e}") for j, t, lam, g, r in rows])


if __name__ == "__main__":
    main()
