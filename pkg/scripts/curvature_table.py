"""Print dim K, dim R, dim W, prolongation and Schur dimensions for a list of algebras.

    python3 scripts/curvature_table.py sl_real:3 sl_real:4 sp_real:3 g2_split chevalley:F4
"""

import argparse
import time

from sympconn.config import build_algebra
from sympconn.curvature import Budget, curvature_report
from sympconn.grading import grade
from sympconn.sympdata import extract

DEFAULT = ["sl_real:3", "sl_real:4", "su:1,2", "su:2,2", "sp_real:2", "sp_real:3",
           "so:2,3", "so:3,4", "g2_split"]


def main():
    p = argparse.ArgumentParser()
    p.add_argument("algebras", nargs="*", default=DEFAULT)
    p.add_argument("--max-columns", type=int, default=None)
    args = p.parse_args()
    budget = Budget(max_columns=args.max_columns)
    print(f"{'algebra':<14}{'dimV':>5}{'dimh':>5}{'K':>6}{'R':>5}{'W':>6}{'R1':>5}{'schur':>6}"
          f"{'ok':>4}{'sec':>7}")
    for spec in args.algebras:
        t0 = time.perf_counter()
        r = curvature_report(extract(grade(build_algebra(spec, allow_large=True))), budget)
        dt = time.perf_counter() - t0
        print(f"{spec:<14}{r['dimV']:>5}{r['dimH']:>5}{r['dimK']:>6}{r['dimR']:>5}{r['dimW']:>6}"
              f"{r['prolongation_dim']:>5}{r['schur_dim']:>6}{'y' if r['pass'] else 'n':>4}"
              f"{dt:>7.2f}")


if __name__ == "__main__":
    main()
