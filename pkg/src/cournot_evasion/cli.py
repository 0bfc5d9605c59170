"""Command-line front end.

    python -m cournot_evasion equilibrium --config run.json
    python -m cournot_evasion hopf --preset set-a
    python -m cournot_evasion simulate --preset set-a --tau 300 --output traj.csv
    python -m cournot_evasion sweep --preset section2 --output sweep.csv

Scalar reports go to stdout (or ``--output``) as JSON, series as CSV.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, TextIO

import numpy as np

from .bifurcation import classify
from .dynamics import AdjustmentSpeeds, HistorySpec, Trajectory, integrate_dde
from .errors import ParameterError
from .linear import eigenvalue_oracle, linearize, routh_hurwitz
from .model import (MarketState, ModelParams, SweepRow, equilibrium, equilibrium_state,
                    feasibility_check, foc_residual, static_sweep)

PARAM_FIELDS = ("q", "s", "t1", "c1", "c2")
SPEED_FIELDS = ("k1", "k2", "h1", "h2")
STATE_FIELDS = ("x10", "x20", "z10", "z20")
CONTROL_FIELDS = ("tau", "step", "t_end")
DEFAULT_STEP = 0.05
DEFAULT_PERTURBATION = (0.01, 0.0, 0.0, 0.0)
TRAJECTORY_HEADER = ("t", "x1", "x2", "z1", "z2")
SWEEP_HEADER = ("s", "z1_star", "z2_star", "p1_star", "p2_star", "feasible")

PRESETS: dict[str, dict] = {
    "set-a": dict(q=0.3, s=40, t1=0.16, c1=0.2, c2=2, k1=0.05, k2=0.01, h1=0.05, h2=0.01),
    "set-b": dict(q=0.3, s=40, t1=0.16, c1=0.2, c2=1.5, k1=0.05, k2=0.01, h1=0.05, h2=0.01),
}
SECTION2 = dict(params=ModelParams(q=0.12, s=22.0, t1=0.16, c1=0.3, c2=0.6),
                s_from=22.0, s_to=100.0, steps=200)


class ConfigError(ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class RunConfig:
    params: ModelParams
    speeds: AdjustmentSpeeds
    initial: MarketState
    tau: float | None = None
    step: float = DEFAULT_STEP
    t_end: float | None = None


def default_horizon(params: ModelParams, speeds: AdjustmentSpeeds) -> float:
    """Twenty periods of the first crossing frequency (floored at 0.01)."""
    omega = classify(params, speeds).omega0 or 0.0
    return 20.0 * 2.0 * math.pi / max(omega, 0.01)


def _number(data: Mapping, name: str) -> float:
    value = data[name]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(name, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(name, "must be finite")
    return float(value)


def config_from_mapping(data: Mapping) -> RunConfig:
    if not isinstance(data, Mapping):
        raise ConfigError("<root>", "config must be a JSON object")
    known = set(PARAM_FIELDS + SPEED_FIELDS + STATE_FIELDS + CONTROL_FIELDS)
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(unknown[0], "unknown field")
    for name in PARAM_FIELDS + SPEED_FIELDS:
        if name not in data:
            raise ConfigError(name, "missing required field")
    values = {name: _number(data, name) for name in data}

    try:
        params = ModelParams(*(values[n] for n in PARAM_FIELDS))
        speeds = AdjustmentSpeeds(*(values[n] for n in SPEED_FIELDS))
    except ParameterError as exc:
        raise ConfigError(exc.field, str(exc).split(": ", 1)[-1]) from exc

    eq = equilibrium_state(params)
    initial = MarketState(*(values.get(n, v + dv) for n, v, dv
                            in zip(STATE_FIELDS, eq, DEFAULT_PERTURBATION)))
    if not initial.x1 + initial.x2 > 0.0:
        raise ConfigError("x10", "initial total output must be > 0")

    tau = values.get("tau")
    if tau is not None and tau < 0.0:
        raise ConfigError("tau", f"delay must be >= 0, got {tau}")
    step = values.get("step", DEFAULT_STEP)
    if not step > 0.0:
        raise ConfigError("step", f"must be > 0, got {step}")
    t_end = values.get("t_end")
    if t_end is None:
        t_end = default_horizon(params, speeds)
    if not t_end >= step:
        raise ConfigError("t_end", f"must be >= step ({step}), got {t_end}")
    return RunConfig(params, speeds, initial, tau, step, t_end)


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("<file>", f"cannot read {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("<file>", f"malformed JSON: {exc}") from exc
    return config_from_mapping(data)


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    return format(float(value), ".12g")


def _csv_lines(rows) -> list[str]:
    if isinstance(rows, Trajectory):
        if len(rows) == 0:
            raise ValueError("cannot write an empty trajectory")
        lines = [",".join(TRAJECTORY_HEADER)]
        for t, st in zip(rows.times, rows.states):
            lines.append(",".join(_fmt(v) for v in (t, *st)))
        return lines
    rows = list(rows)
    if not rows:
        raise ValueError("cannot write an empty table")
    lines = [",".join(SWEEP_HEADER)]
    for r in rows:
        lines.append(",".join(_fmt(v) for v in (r.s_value, r.z1_star, r.z2_star,
                                                  r.p1_star, r.p2_star, r.feasible)))
    return lines


def write_csv(rows: Trajectory | Iterable[SweepRow], path) -> None:
    """Write a trajectory or sweep table; ``path`` may also be an open text stream."""
    text = "\n".join(_csv_lines(rows)) + "\n"
    if isinstance(path, io.TextIOBase) or hasattr(path, "write"):
        path.write(text)
        return
    with open(path, "w", newline="") as fh:
        fh.write(text)


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    lines = Path(path).read_text().splitlines()
    return lines[0].split(","), [line.split(",") for line in lines[1:]]


def _finite(value: float) -> float | None:
    return float(value) if math.isfinite(value) else None


def _roots_json(roots) -> list[dict]:
    return [{"re": float(z.real), "im": float(z.imag)} for z in roots]


def equilibrium_report(config: RunConfig) -> dict:
    rep = equilibrium(config.params)
    fc = feasibility_check(config.params)
    x1, x2, z1, z2 = rep.state
    return {
        "x1_star": x1, "x2_star": x2, "z1_star": z1, "z2_star": z2,
        "evaded": rep.evaded,
        "feasible": rep.feasible,
        "feasibility": {"lower_c2": _finite(fc.lower), "upper_c2": _finite(fc.upper),
                        "reason": fc.reason},
        "profits": list(rep.profits),
        "foc_residual": max(abs(v) for v in foc_residual(rep.state, config.params)),
    }


def stability_report(config: RunConfig) -> dict:
    coeffs, J, poly, _ = linearize(config.params, config.speeds)
    rh = routh_hurwitz(poly)
    roots = eigenvalue_oracle(poly)
    return {
        "jacobian_coefficients": coeffs.as_dict(),
        "jacobian": J.tolist(),
        "m": {"m43": poly.m43, "m42": poly.m42, "m41": poly.m41, "m40": poly.m40},
        "routh_hurwitz": {"d1": rh.d1, "d2": rh.d2, "d3": rh.d3, "d4": rh.d4},
        "eigenvalues": _roots_json(roots),
        "eigenvalue_residual": float(max(abs(poly(z)) for z in roots)),
        "stable": rh.stable,
    }


def hopf_report(config: RunConfig) -> dict:
    h = classify(config.params, config.speeds)
    r = h.omega_polynomial
    return {
        "n": h.delay_coefficients.as_dict(),
        "r": {"r6": r.r6, "r4": r.r4, "r2": r.r2, "r0": r.r0},
        "routh_hurwitz_stable": h.routh_hurwitz.stable,
        "crossings": [
            {"omega": c.omega, "tau": c.tau, "residual": c.residual,
             "a1": c.evaluation.a1, "a2": c.evaluation.a2,
             "a3": c.evaluation.a3, "a4": c.evaluation.a4}
            for c in h.crossings
        ],
        "omega0": h.omega0,
        "tau0": h.tau0,
        "crossing_residual": h.residual,
        "transversality": h.transversality,
        "transversality_sign": h.transversality_sign,
        "classification": h.classification.value,
    }


class CommandError(RuntimeError):
    pass


def _emit(text: str, output) -> None:
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(output, "w", newline="") as fh:
            fh.write(text)


def run_command(name: str, config: RunConfig | None, flags: argparse.Namespace) -> int:
    output = getattr(flags, "output", None)
    if name in ("equilibrium", "stability", "hopf"):
        build = {"equilibrium": equilibrium_report, "stability": stability_report,
                 "hopf": hopf_report}[name]
        _emit(json.dumps(build(config), indent=2) + "\n", output)
        return 0

    if name == "simulate":
        tau = flags.tau if flags.tau is not None else (config.tau or 0.0)
        step = flags.step if flags.step is not None else config.step
        t_end = flags.t_end if flags.t_end is not None else config.t_end
        if tau < 0.0:
            raise CommandError(f"--tau must be >= 0, got {tau}")
        traj = integrate_dde(HistorySpec.constant(config.initial), config.params,
                             config.speeds, tau, step, t_end)
        buf = io.StringIO()
        write_csv(traj, buf)
        _emit(buf.getvalue(), output)
        if traj.truncated:
            raise CommandError(f"trajectory truncated: {traj.error}")
        return 0

    if name == "sweep":
        if flags.param != "s":
            raise CommandError(f"only --param s is supported, got {flags.param!r}")
        if flags.preset == "section2":
            base = SECTION2["params"]
            lo = SECTION2["s_from"] if flags.s_from is None else flags.s_from
            hi = SECTION2["s_to"] if flags.s_to is None else flags.s_to
            steps = SECTION2["steps"] if flags.steps is None else flags.steps
        else:
            base = config.params
            if flags.s_from is None or flags.s_to is None:
                raise CommandError("sweep needs --from and --to (or --preset section2)")
            lo, hi = flags.s_from, flags.s_to
            steps = 200 if flags.steps is None else flags.steps
        if steps < 1:
            raise CommandError(f"--steps must be >= 1, got {steps}")
        grid = np.linspace(lo, hi, steps) if steps > 1 else np.array([lo])
        try:
            rows = static_sweep(base, grid)
        except ParameterError as exc:
            raise CommandError(f"sweep grid invalid: {exc}") from exc
        buf = io.StringIO()
        write_csv(rows, buf)
        _emit(buf.getvalue(), output)
        return 0

    raise CommandError(f"unknown command {name!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cournot_evasion", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, presets):
        src = p.add_mutually_exclusive_group()
        src.add_argument("--config", help="JSON run configuration")
        src.add_argument("--preset", choices=presets)
        p.add_argument("--output", "-o", help="output file (default: stdout)")

    for name, text in (("equilibrium", "static equilibrium and feasibility"),
                       ("stability", "Jacobian, characteristic quartic and Routh-Hurwitz test"),
                       ("hopf", "imaginary-axis crossings, critical delay, classification")):
        common(sub.add_parser(name, help=text), sorted(PRESETS))

    sim = sub.add_parser("simulate", help="integrate the (delayed) dynamics to CSV")
    common(sim, sorted(PRESETS))
    sim.add_argument("--tau", type=float)
    sim.add_argument("--step", type=float)
    sim.add_argument("--t-end", dest="t_end", type=float)

    sw = sub.add_parser("sweep", help="equilibrium declarations and profits against s")
    common(sw, sorted(PRESETS) + ["section2"])
    sw.add_argument("--param", default="s")
    sw.add_argument("--from", dest="s_from", type=float)
    sw.add_argument("--to", dest="s_to", type=float)
    sw.add_argument("--steps", type=int, help="number of grid points")
    return parser


def main(argv=None, stderr: TextIO | None = None) -> int:
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        config = None
        if args.config:
            config = load_config(args.config)
        elif args.preset in PRESETS:
            config = config_from_mapping(PRESETS[args.preset])
        elif not (args.command == "sweep" and args.preset == "section2"):
            raise ConfigError("--config", "a config file or preset is required")
        return run_command(args.command, config, args)
    except ConfigError as exc:
        print(f"error: config field {exc}", file=stderr)
        return 2
    except (ArithmeticError, ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
