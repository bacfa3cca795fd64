"""Residual tables of the six structure equations on Gamma_a under an eps sweep.

    python3 scripts/flow_convergence.py --algebra su:2,2 --a normal:1,1/3,2,-1/2,1
"""

import argparse

import numpy as np

from sympconn import contactflow as cf
from sympconn.config import build_algebra


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--algebra", default="sp_real:2")
    p.add_argument("--a", default="normal:1,1/3,2,-1/2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eps", default="2e-2,1e-2,5e-3,2.5e-3,1.25e-3")
    p.add_argument("--trials", type=int, default=3)
    args = p.parse_args()
    eps = tuple(float(x) for x in args.eps.split(","))

    ctx = cf.FlowContext(build_algebra(args.algebra))
    a = cf.momentum_matrix(ctx, cf.parse_momentum(ctx, args.a))
    rng = np.random.default_rng(args.seed)
    for t in range(args.trials):
        fp = cf.generic_point(ctx, a, rng)
        v1, v2 = cf.random_tangent(ctx, fp, rng), cf.random_tangent(ctx, fp, rng)
        orders, table, spread = cf.convergence_orders(ctx, fp, a, v1, v2, eps)
        print(f"trial {t}  invariant spread {spread:.1e}")
        print("  " + f"{'eps':>10}" + "".join(f"{n:>11}" for n in cf.EQUATIONS))
        for k, e in enumerate(eps):
            print("  " + f"{e:>10.2e}" + "".join(f"{table[n][k]:>11.2e}" for n in cf.EQUATIONS))
        print("  " + f"{'order':>10}" + "".join(
            f"{'exact' if orders[n] is None else format(orders[n], '.3f'):>11}" for n in cf.EQUATIONS))


if __name__ == "__main__":
    main()
