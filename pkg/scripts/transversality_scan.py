"""Fraction of random points of the root cone where a* is transversal, plus stabilizer data.

    python3 scripts/transversality_scan.py
"""

import argparse

import numpy as np

from sympconn import contactflow as cf
from sympconn.config import build_algebra

CASES = [("su:2,2", "bochner:1,1"), ("su:1,2", "bochner:0,1"), ("su:2,3", "bochner:1,2"), ("sp_real:2", "ricci:1"),
         ("sp_real:3", "ricci:1"), ("sl_real:3", "normal:1"), ("sl_real:3", "normal:1,1"),
         ("so:2,3", "normal:1")]


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    print(f"{'algebra':<11}{'momentum':<18}{'fraction':>9}{'stab':>6}{'sym':>5}  normal form")
    for spec, mom in CASES:
        ctx = cf.FlowContext(build_algebra(spec))
        try:
            m = cf.parse_momentum(ctx, mom)
        except cf.MomentumError as e:
            print(f"{spec:<11}{mom:<18}  skipped: {e}")
            continue
        a = cf.momentum_matrix(ctx, m)
        frac = cf.transversality_scan(ctx, ctx.coords(a), args.samples,
                                      np.random.default_rng(args.seed))
        sym = cf.symmetry_dimension(ctx, m.a)
        nf = sym.get("normal_form")
        nf_txt = "" if nf is None else f"c={nf['c']} dim k={nf['dim_k']} consistent={nf['consistent']}"
        print(f"{spec:<11}{mom:<18}{frac:>9.4f}{sym['stab_dim']:>6}{sym['symmetry_dim']:>5}  {nf_txt}")


if __name__ == "__main__":
    main()
