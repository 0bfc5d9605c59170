"""Static equilibria, local stability and delay analysis for the two reference
parameter sets, plus short trajectories around the critical delay.

    python scripts/reference_runs.py --out runs/
"""

import argparse
import json
import math
from pathlib import Path

from cournot_evasion import (AdjustmentSpeeds, HistorySpec, ModelParams, classify, equilibrium,
                             integrate_dde, oscillation_metrics)
from cournot_evasion.cli import write_csv

SPEEDS = AdjustmentSpeeds(k1=0.05, k2=0.01, h1=0.05, h2=0.01)
SETS = {
    "A": ModelParams(q=0.3, s=40.0, t1=0.16, c1=0.2, c2=2.0),
    "B": ModelParams(q=0.3, s=40.0, t1=0.16, c1=0.2, c2=1.5),
}


def summarise(name, params, out, step):
    rep = equilibrium(params)
    h = classify(params, SPEEDS)
    print(f"set {name}: x* = " + ", ".join(f"{v:.6f}" for v in rep.state)
          + f"  feasible={rep.feasible}")
    print(f"  Routh-Hurwitz at tau=0: {'stable' if h.routh_hurwitz.stable else 'unstable'}")
    print(f"  classification: {h.classification.value}")
    if h.tau0 is not None:
        print(f"  omega0={h.omega0:.10g}  tau0={h.tau0:.10g}  residual={h.residual:.2e}"
              f"  dRe/dtau={h.transversality:.3e}")

    # trajectories bracketing tau0, or a few delays when there is none
    taus = [0.5 * h.tau0, 0.9 * h.tau0, 1.1 * h.tau0] if h.tau0 else [50.0, 200.0, 500.0]
    # twenty crossing periods; without a crossing the disturbance reaches round-off
    # well before that, so a shorter window keeps the rate measurable
    horizon = 20 * 2 * math.pi / h.omega0 if h.omega0 else 4000.0
    x0 = rep.state
    init = (x0.x1 + 0.01, x0.x2, x0.z1, x0.z2)
    rows = []
    for tau in taus:
        tr = integrate_dde(HistorySpec.constant(init), params, SPEEDS, tau, step, horizon + tau)
        m = oscillation_metrics(tr, x0, horizon if h.omega0 is None else horizon / 2)
        print(f"  tau={tau:9.3f}  verdict={m.verdict.value:<15} rate={m.growth_rate:+.3e}")
        rows.append({"tau": tau, "verdict": m.verdict.value, "growth_rate": m.growth_rate})
        if out:
            write_csv(tr, out / f"set{name}_tau{tau:.1f}.csv")
    return {"equilibrium": list(rep.state), "classification": h.classification.value,
            "omega0": h.omega0, "tau0": h.tau0, "runs": rows}


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--out", type=Path, help="directory for trajectory CSVs and summary.json")
    ap.add_argument("--step", type=float, default=0.05)
    args = ap.parse_args()
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
    summary = {name: summarise(name, p, args.out, args.step) for name, p in SETS.items()}
    if args.out:
        (args.out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")


if __name__ == "__main__":
    main()
