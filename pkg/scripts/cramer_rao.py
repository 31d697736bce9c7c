"""Monte Carlo check of the Cramer-Rao bound for radius estimation from positions.

    python scripts/cramer_rao.py --n 10000 --replicas 200 --threads 4
"""
import argparse
import math

from curvprobe.mle import cramer_rao_experiment
from curvprobe.probe import two_level


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--j", type=int, default=1)
    ap.add_argument("--alpha", type=float, default=math.pi / 4)
    ap.add_argument("--beta", type=float, default=0.0)
    ap.add_argument("--t", type=float, default=1.0)
    ap.add_argument("--lam0", type=float, default=1.0)
    ap.add_argument("--n", type=int, default=10_000)
    ap.add_argument("--replicas", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    res = cramer_rao_experiment(two_level(args.j, alpha=args.alpha, beta=args.beta), args.t, args.lam0,
                                args.n, args.replicas, seed=args.seed, threads=args.threads)
    print(f"position FI F      = {res.fisher:.6g}")
    print(f"quantum FI H       = {res.qfi:.6g}")
    print(f"mean estimate      = {res.mean:.6f} +- {res.stderr:.1e}")
    print(f"Var * N * F        = {res.efficiency:.4f}   (1 for an efficient estimator)")
    print(f"Var * N * H        = {res.variance * res.n * res.qfi:.4f}   (>= 1 by the quantum bound)")
    print(f"boundary hits      = {res.failures}")


if __name__ == "__main__":
    main()
