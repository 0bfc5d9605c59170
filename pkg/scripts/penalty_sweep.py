"""Equilibrium declarations and profits against the penalty rate s.

Defaults reproduce the `sweep --preset section2` grid (c1=0.3, c2=0.6, q=0.12,
t1=0.16, s in [22, 100]).

    python scripts/penalty_sweep.py --out sweep.csv
"""

import argparse
import sys

import numpy as np

from cournot_evasion import ModelParams, feasibility_check, static_sweep
from cournot_evasion.cli import write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--q", type=float, default=0.12)
    ap.add_argument("--t1", type=float, default=0.16)
    ap.add_argument("--c1", type=float, default=0.3)
    ap.add_argument("--c2", type=float, default=0.6)
    ap.add_argument("--s-from", type=float, default=22.0)
    ap.add_argument("--s-to", type=float, default=100.0)
    ap.add_argument("--steps", type=int, default=200)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()

    base = ModelParams(args.q, args.s_to, args.t1, args.c1, args.c2)
    grid = np.linspace(args.s_from, args.s_to, args.steps)
    rows = static_sweep(base, grid)

    # smallest s on the grid with nonnegative declarations for both firms
    first = next((r.s_value for r in rows if r.feasible), None)
    fc = feasibility_check(base)
    print(f"feasible c2 window at s={args.s_to:g}: [{fc.lower:.4g}, {fc.upper:.4g}]; "
          f"first feasible s on grid: {first}", file=sys.stderr)
    z1 = np.array([r.z1_star for r in rows])
    z2 = np.array([r.z2_star for r in rows])
    mono = bool(np.all(np.diff(z1) > 0) and np.all(np.diff(z2) > 0))
    print(f"z1*, z2* increasing in s: {mono}", file=sys.stderr)

    write_csv(rows, sys.stdout if args.out == "-" else args.out)


if __name__ == "__main__":
    main()
