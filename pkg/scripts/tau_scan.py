"""Growth rate of the kicked equilibrium against the delay, by simulation and by
following the rightmost characteristic root.

    python scripts/tau_scan.py --points 12

Very short delays damp the disturbance to round-off inside the measuring window;
those rows report NonOscillatory with a zero simulated rate.
"""

import argparse
import math

import numpy as np

from cournot_evasion import (AdjustmentSpeeds, HistorySpec, ModelParams, classify, delay_split,
                             integrate_dde, jacobian_coefficients, oscillation_metrics)
from cournot_evasion.model import equilibrium_state

SET_A = ModelParams(q=0.3, s=40.0, t1=0.16, c1=0.2, c2=2.0)
SPEEDS = AdjustmentSpeeds(k1=0.05, k2=0.01, h1=0.05, h2=0.01)


def newton(n, lam, tau, iters=60):
    for _ in range(iters):
        E = np.exp(-lam * tau)
        F = n.P(lam) + n.Q(lam) * E
        dF = n.dP(lam) + (n.dQ(lam) - tau * n.Q(lam)) * E
        step = F / dF
        lam -= step
        if abs(step) < 1e-15 * max(1.0, abs(lam)):
            break
    return lam


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--points", type=int, default=12)
    ap.add_argument("--max-factor", type=float, default=1.5, help="scan up to this multiple of tau0")
    ap.add_argument("--step", type=float, default=0.05)
    args = ap.parse_args()

    h = classify(SET_A, SPEEDS)
    n = delay_split(jacobian_coefficients(SET_A), SPEEDS)
    eq = equilibrium_state(SET_A)
    init = (eq.x1 + 0.01, eq.x2, eq.z1, eq.z2)
    horizon = 20 * 2 * math.pi / h.omega0
    print(f"tau0 = {h.tau0:.6f}, omega0 = {h.omega0:.8f}")
    print(f"{'tau':>10} {'tau/tau0':>9} {'Re(root)':>12} {'sim rate':>12}  verdict")

    # continue the crossing root downward and upward from tau0
    taus = np.linspace(0.1 * h.tau0, args.max_factor * h.tau0, args.points)
    for tau in taus:
        lam = newton(n, complex(0.0, h.omega0), h.tau0)
        for t in np.linspace(h.tau0, tau, 40)[1:]:
            lam = newton(n, lam, t)
        tr = integrate_dde(HistorySpec.constant(init), SET_A, SPEEDS, tau, args.step, horizon)
        m = oscillation_metrics(tr, eq, horizon / 2)
        print(f"{tau:10.3f} {tau / h.tau0:9.3f} {lam.real:+12.4e} {m.growth_rate:+12.4e}  "
              f"{m.verdict.value}")


if __name__ == "__main__":
    main()
