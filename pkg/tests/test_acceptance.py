"""Acceptance criteria, one PASS/FAIL line each.

Run under pytest (the lines are repeated in the terminal summary) or directly:

    python tests/test_acceptance.py
"""

import io
import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import SET_A, SET_B, SPEEDS, random_feasible, random_speeds  # noqa: E402
from cournot_evasion import (Classification, HistorySpec, ModelParams, Verdict, classify,  # noqa: E402
                             crossing_frequencies, delay_split, eigenvalue_oracle, equilibrium,
                             feasibility_check, foc_residual, integrate_dde, integrate_ode,
                             jacobian_coefficients, jacobian_matrix, ode_rhs,
                             omega_polynomial, oscillation_metrics, routh_hurwitz)
from cournot_evasion.cli import main  # noqa: E402
from cournot_evasion.linear import char_poly_no_delay, linearize  # noqa: E402
from cournot_evasion.model import equilibrium_state  # noqa: E402

RESULTS: list[str] = []

EXPECTED_A = (0.34710, 0.0347, 0.85075, 0.03257)
EXPECTED_B = (0.4359, 0.05813, 0.824019, 0.059313)
OMEGA0_REF, TAU0_REF = 0.010083, 164.5979
N_DRAWS = 200
BAND = 1e-12
COEFF_CELLS = [("a10", 0, 0), ("a01", 0, 1), ("a001", 0, 2), ("b10", 1, 0), ("b01", 1, 1),
               ("b001", 1, 3), ("c10", 2, 0), ("c01", 2, 1), ("c001", 2, 2), ("d10", 3, 0),
               ("d01", 3, 1), ("d001", 3, 3)]


def report(tag: str, ok: bool, detail: str) -> bool:
    line = f"{'PASS' if ok else 'FAIL'}  {tag:<4} {detail}"
    RESULTS.append(line)
    print(line)
    return ok


def kicked(params):
    eq = equilibrium_state(params)
    return (eq.x1 + 0.01, eq.x2, eq.z1, eq.z2)


# --- individual criteria -------------------------------------------------------------------

def check_equilibrium(tag, params, expected):
    state = equilibrium(params).state
    err = max(abs(a - b) for a, b in zip(state, expected))
    detail = "equilibrium " + ", ".join(f"{v:.6f}" for v in state) + f"  max|err|={err:.2e} (tol 1e-4)"
    return report(tag, err <= 1e-4, detail)


def check_hopf_regression():
    h = classify(SET_A, SPEEDS)
    if h.omega0 is None:
        return report("C3", False, f"no crossing found, classification {h.classification.value}")
    rel_w = abs(h.omega0 - OMEGA0_REF) / OMEGA0_REF
    rel_t = abs(h.tau0 - TAU0_REF) / TAU0_REF
    ok = rel_w <= 1e-2 and rel_t <= 1e-2 and h.residual < 1e-8
    return report("C3", ok,
                  f"omega0={h.omega0:.7g} (ref {OMEGA0_REF}, rel {rel_w:.2e}), "
                  f"tau0={h.tau0:.7g} (ref {TAU0_REF}, rel {rel_t:.2e}), "
                  f"residual={h.residual:.1e} (tol rel 1e-2, residual 1e-8)")


def check_delay_independent():
    h = classify(SET_B, SPEEDS)
    roots = crossing_frequencies(omega_polynomial(h.delay_coefficients))
    ok = roots == [] and h.classification is Classification.STABLE_FOR_ALL_DELAYS
    return report("C4", ok, f"set B crossings={roots}, classification={h.classification.value}")


def check_routh_hurwitz():
    parts, ok = [], True
    for name, params in (("A", SET_A), ("B", SET_B)):
        _, _, poly, _ = linearize(params, SPEEDS)
        rh = routh_hurwitz(poly)
        top = eigenvalue_oracle(poly).real.max()
        ok &= rh.stable and top < 0
        parts.append(f"set {name}: RH {'stable' if rh.stable else 'unstable'}, max Re={top:.4g}")
    return report("C5", ok, "; ".join(parts))


def check_hopf_behaviour():
    h = classify(SET_A, SPEEDS)
    horizon = 20 * 2 * math.pi / h.omega0
    eq = equilibrium_state(SET_A)
    verdicts = {}
    for factor in (0.9, 1.1):
        tr = integrate_dde(HistorySpec.constant(kicked(SET_A)), SET_A, SPEEDS,
                           factor * h.tau0, 0.05, horizon)
        m = oscillation_metrics(tr, eq, horizon / 2)
        verdicts[factor] = (m.verdict, m.growth_rate, tr.truncated)
    below, above = verdicts[0.9], verdicts[1.1]
    ok = (below[0] is Verdict.DECAYING and above[0] in (Verdict.GROWING, Verdict.SUSTAINED)
          and not below[2] and not above[2])
    return report("C6", ok,
                  f"tau0={h.tau0:.6g}: 0.9*tau0 -> {below[0].value} (rate {below[1]:.3g}), "
                  f"1.1*tau0 -> {above[0].value} (rate {above[1]:.3g}), horizon {horizon:.6g}")


def _fd_jacobian(params, h_rel=1e-5):
    unit = type(SPEEDS)(1.0, 1.0, 1.0, 1.0)
    eq = np.array(equilibrium_state(params))
    J = np.zeros((4, 4))
    for j in range(4):
        h = h_rel * max(abs(eq[j]), 1e-3)
        up, dn = eq.copy(), eq.copy()
        up[j] += h
        dn[j] -= h
        J[:, j] = (np.array(ode_rhs(up, params, unit)) - np.array(ode_rhs(dn, params, unit))) / (2 * h)
    return J


def check_property_suite():
    rng = np.random.default_rng(20240601)
    draws = random_feasible(rng, N_DRAWS)
    foc = jac = closure = 0.0
    rh_mismatch = rh_checked = 0
    for params in draws:
        speeds = random_speeds(rng)
        foc = max(foc, max(map(abs, foc_residual(equilibrium_state(params), params))))

        g = jacobian_coefficients(params)
        J = _fd_jacobian(params)
        for name, i, j in COEFF_CELLS:
            a = getattr(g, name)
            jac = max(jac, abs(a - J[i, j]) / abs(a))

        Js = jacobian_matrix(g, speeds)
        m = char_poly_no_delay(Js)
        n = delay_split(g, speeds)
        s = np.max(np.abs(Js))
        closure = max(closure, abs(n.n43 - m.m43) / s,
                      abs(n.n42 + n.n22 - m.m42) / s**2,
                      abs(n.n41 + n.n21 - m.m41) / s**3,
                      abs(n.n40 + n.n20 - m.m40) / s**4)

        scale = max(1.0, *map(abs, m.coefficients()))
        top = eigenvalue_oracle(m).real.max()
        if abs(top) > BAND * scale:
            rh_checked += 1
            rh_mismatch += routh_hurwitz(m).stable != (top < 0)

    # feasibility against the sign of the declarations, c2 drawn across and beyond the window
    feas_mismatch = feas_checked = 0
    while feas_checked < N_DRAWS:
        q, s_ = rng.uniform(0.05, 0.95), rng.uniform(1.0, 200.0)
        p = ModelParams(q, s_, rng.uniform(0.01, 0.9), rng.uniform(0.05, 5.0),
                        float(np.exp(rng.uniform(-4.0, 3.0))))
        z = equilibrium_state(p)
        if min(abs(z.z1), abs(z.z2)) <= 1e-9:
            continue
        feas_checked += 1
        feas_mismatch += feasibility_check(p).feasible != (z.z1 >= 0 and z.z2 >= 0)

    ok = (foc < 1e-10 and jac < 1e-6 and closure < 1e-13 and rh_mismatch == 0
          and rh_checked > 0.9 * N_DRAWS and feas_mismatch == 0)
    return report("C7", ok,
                  f"{N_DRAWS} draws: FOC {foc:.1e} (<1e-10), Jacobian fd rel {jac:.1e} (<1e-6), "
                  f"closure {closure:.1e}, RH/oracle mismatches {rh_mismatch}/{rh_checked}, "
                  f"feasibility mismatches {feas_mismatch}/{feas_checked}")


def check_integrator_order():
    steps = [2.0, 1.0, 0.5]
    errors = []
    for h in steps:
        coarse = integrate_ode(kicked(SET_A), SET_A, SPEEDS, h, 100.0).states[-1]
        ref = integrate_ode(kicked(SET_A), SET_A, SPEEDS, h / 4, 100.0).states[-1]
        errors.append(float(np.max(np.abs(coarse - ref))))
    slope = float(np.polyfit(np.log(steps), np.log(errors), 1)[0])
    return report("C8", 3.5 <= slope <= 4.5,
                  f"RK4 error slope {slope:.3f} (window [3.5, 4.5]), errors "
                  + ", ".join(f"{e:.2e}" for e in errors))


def check_sweep_figure():
    out, err = io.StringIO(), io.StringIO()
    saved = sys.stdout
    sys.stdout = out
    try:
        code = main(["sweep", "--preset", "section2"], stderr=err)
    finally:
        sys.stdout = saved
    lines = out.getvalue().splitlines()
    rows = [line.split(",") for line in lines[1:]]
    s = np.array([float(r[0]) for r in rows])
    z1 = np.array([float(r[1]) for r in rows])
    z2 = np.array([float(r[2]) for r in rows])
    feasible = all(r[5] == "true" for r in rows)
    monotone = bool(np.all(np.diff(z1) > 0) and np.all(np.diff(z2) > 0))
    ok = (code == 0 and feasible and monotone and len(rows) == 200
          and s[0] == 22.0 and s[-1] == 100.0)
    return report("C9", ok,
                  f"sweep rows={len(rows)} s=[{s[0]:g}, {s[-1]:g}], all feasible={feasible}, "
                  f"z1*,z2* strictly increasing={monotone}")


CRITERIA = {
    "C1": lambda: check_equilibrium("C1", SET_A, EXPECTED_A),
    "C2": lambda: check_equilibrium("C2", SET_B, EXPECTED_B),
    "C3": check_hopf_regression,
    "C4": check_delay_independent,
    "C5": check_routh_hurwitz,
    "C6": check_hopf_behaviour,
    "C7": check_property_suite,
    "C8": check_integrator_order,
    "C9": check_sweep_figure,
}


@pytest.mark.parametrize("tag", list(CRITERIA))
def test_criterion(tag):
    assert CRITERIA[tag](), RESULTS[-1]


if __name__ == "__main__":
    passed = sum(bool(check()) for check in CRITERIA.values())
    print(f"{passed}/{len(CRITERIA)} criteria passed")
    sys.exit(0 if passed == len(CRITERIA) else 1)
