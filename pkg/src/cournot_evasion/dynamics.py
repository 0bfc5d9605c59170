"""Gradient-adjustment dynamics, with and without the follower's delay.

Integration is classical fixed-step RK4 written over plain floats; a
trajectory of a few hundred thousand steps takes a couple of seconds.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ParameterError, PriceSingularityError
from .model import MarketState, ModelParams

# growth rates within +-OSCILLATION_TOL (per unit time) count as sustained
OSCILLATION_TOL = 1e-5


@dataclass(frozen=True)
class AdjustmentSpeeds:
    k1: float
    k2: float
    h1: float
    h2: float

    def __post_init__(self):
        for name in ("k1", "k2", "h1", "h2"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ParameterError(name, f"expected a number, got {value!r}")
            if not (math.isfinite(value) and value > 0.0):
                raise ParameterError(name, f"adjustment speed must be > 0, got {value}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.k1, self.k2, self.h1, self.h2)


@dataclass
class HistorySpec:
    """Initial data for the delayed system.

    ``phi`` gives the leader's output on [-tau, 0]; the other three
    components only need their value at t = 0.
    """

    phi: Callable[[float], float]
    x20: float
    z10: float
    z20: float

    @classmethod
    def constant(cls, state: Sequence[float]) -> "HistorySpec":
        x10, x20, z10, z20 = (float(v) for v in state)
        return cls(lambda theta: x10, x20, z10, z20)

    def initial_state(self) -> MarketState:
        return MarketState(float(self.phi(0.0)), self.x20, self.z10, self.z20)


@dataclass
class Trajectory:
    times: np.ndarray  # shape (n,)
    states: np.ndarray  # shape (n, 4), columns x1, x2, z1, z2
    step: float
    error: str | None = None

    def __len__(self):
        return len(self.times)

    def state(self, i: int) -> MarketState:
        return MarketState(*(float(v) for v in self.states[i]))

    @property
    def truncated(self) -> bool:
        return self.error is not None


class Verdict(str, enum.Enum):
    DECAYING = "Decaying"
    SUSTAINED = "Sustained"
    GROWING = "Growing"
    NON_OSCILLATORY = "NonOscillatory"


@dataclass
class OscillationMetrics:
    peak_amplitudes: list[float]
    peak_times: list[float]
    growth_rate: float
    verdict: Verdict


def _make_rhs(params: ModelParams, speeds: AdjustmentSpeeds):
    """Return f(x1, x2, z1, z2, x1_delayed) -> 4-tuple for the delayed system.

    Passing x1_delayed == x1 gives the undelayed system exactly.
    """
    k1, k2, h1, h2 = speeds.as_tuple()
    c1, c2 = params.c1, params.c2
    Q = params.qst1
    A = 1.0 - params.q * params.t1
    B = (1.0 - params.q) * params.t1

    def f(x1, x2, z1, z2, x1d):
        S = x1 + x2
        Sd = x1d + x2
        if not (S > 0.0 and Sd > 0.0):
            raise PriceSingularityError(
                f"price singularity: total output {S if not S > 0.0 else Sd!r} <= 0")
        p = 1.0 / S
        pd = 1.0 / Sd
        e1 = x1 * p - z1
        return (
            k1 * ((A - Q * e1) * (p - x1 * p * p) - c1),
            k2 * ((A - Q * (x2 * pd - z2)) * (pd - x2 * pd * pd) - c2),
            h1 * (Q * e1 - B),
            # undelayed x1 here, as in the model's follower declaration rule
            h2 * (Q * (x2 * p - z2) - B),
        )

    return f


def ode_rhs(state: Sequence[float], params: ModelParams,
            speeds: AdjustmentSpeeds) -> tuple[float, float, float, float]:
    x1, x2, z1, z2 = state
    return _make_rhs(params, speeds)(x1, x2, z1, z2, x1)


def dde_rhs(state: Sequence[float], x1_delayed: float, params: ModelParams,
            speeds: AdjustmentSpeeds) -> tuple[float, float, float, float]:
    """Right-hand side when the follower sees the leader's output ``x1_delayed``."""
    x1, x2, z1, z2 = state
    return _make_rhs(params, speeds)(x1, x2, z1, z2, x1_delayed)


def _n_steps(step: float, t_end: float) -> int:
    return max(1, int(math.ceil(t_end / step - 1e-9)))


def _check_controls(step: float, t_end: float) -> None:
    if not step > 0.0:
        raise ValueError(f"step must be > 0, got {step}")
    if not t_end >= step:
        raise ValueError(f"t_end must be >= step, got t_end={t_end}, step={step}")


def _pack(rows: list, h: float, error: str | None) -> Trajectory:
    states = np.array(rows, dtype=float).reshape(-1, 4)
    times = h * np.arange(len(states), dtype=float)
    return Trajectory(times, states, h, error)


def integrate_ode(init: Sequence[float], params: ModelParams, speeds: AdjustmentSpeeds,
                  step: float, t_end: float) -> Trajectory:
    _check_controls(step, t_end)
    f = _make_rhs(params, speeds)
    h = float(step)
    h2, h6 = 0.5 * h, h / 6.0
    a, b, c, d = (float(v) for v in init)
    rows = [(a, b, c, d)]
    error = None
    try:
        for _ in range(_n_steps(h, t_end)):
            k1 = f(a, b, c, d, a)
            ya = a + h2 * k1[0]
            k2 = f(ya, b + h2 * k1[1], c + h2 * k1[2], d + h2 * k1[3], ya)
            ya = a + h2 * k2[0]
            k3 = f(ya, b + h2 * k2[1], c + h2 * k2[2], d + h2 * k2[3], ya)
            ya = a + h * k3[0]
            k4 = f(ya, b + h * k3[1], c + h * k3[2], d + h * k3[3], ya)
            a += h6 * (k1[0] + 2.0 * (k2[0] + k3[0]) + k4[0])
            b += h6 * (k1[1] + 2.0 * (k2[1] + k3[1]) + k4[1])
            c += h6 * (k1[2] + 2.0 * (k2[2] + k3[2]) + k4[2])
            d += h6 * (k1[3] + 2.0 * (k2[3] + k3[3]) + k4[3])
            rows.append((a, b, c, d))
    except PriceSingularityError as exc:
        error = f"{exc} at t = {(len(rows) - 1) * h:.12g}"
    return _pack(rows, h, error)


def snapped_step(tau: float, step: float) -> float:
    """Largest step <= ``step`` that divides ``tau`` into whole steps."""
    if tau <= 0.0:
        return step
    return tau / math.ceil(tau / step - 1e-12)


def integrate_dde(history: HistorySpec, params: ModelParams, speeds: AdjustmentSpeeds,
                  tau: float, step: float, t_end: float) -> Trajectory:
    """Method of steps on a grid commensurate with ``tau``.

    The delayed leader output at grid times is read straight from the stored
    trajectory (or from ``history.phi`` before t = 0).  RK4's half-step stages
    need x1 between grid points; inside the history that comes from ``phi``,
    afterwards from the cubic Hermite interpolant on the stored values and
    slopes, which keeps the scheme fourth order.
    """
    if tau < 0.0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    if tau == 0.0:
        return integrate_ode(history.initial_state(), params, speeds, step, t_end)
    _check_controls(step, t_end)

    f = _make_rhs(params, speeds)
    phi = history.phi
    lag = int(round(tau / snapped_step(tau, step)))
    h = tau / lag
    h2, h6, h8 = 0.5 * h, h / 6.0, h / 8.0

    a, b, c, d = (float(phi(0.0)), float(history.x20), float(history.z10), float(history.z20))
    rows = [(a, b, c, d)]
    xs = [a]  # x1 on the grid
    dxs = []  # dx1/dt on the grid (k1 of each step; the leader's row has no delayed input)
    error = None
    try:
        for i in range(_n_steps(h, t_end)):
            j = i - lag  # grid index of t_i - tau
            xd0 = float(phi(j * h)) if j < 0 else xs[j]
            k1 = f(a, b, c, d, xd0)
            dxs.append(k1[0])
            if j < 0:
                xdm = float(phi((j + 0.5) * h))
                xd1 = float(phi((j + 1) * h)) if j + 1 < 0 else xs[0]
            else:
                xd1 = xs[j + 1]
                xdm = 0.5 * (xd0 + xd1) + h8 * (dxs[j] - dxs[j + 1])
            k2 = f(a + h2 * k1[0], b + h2 * k1[1], c + h2 * k1[2], d + h2 * k1[3], xdm)
            k3 = f(a + h2 * k2[0], b + h2 * k2[1], c + h2 * k2[2], d + h2 * k2[3], xdm)
            k4 = f(a + h * k3[0], b + h * k3[1], c + h * k3[2], d + h * k3[3], xd1)
            a += h6 * (k1[0] + 2.0 * (k2[0] + k3[0]) + k4[0])
            b += h6 * (k1[1] + 2.0 * (k2[1] + k3[1]) + k4[1])
            c += h6 * (k1[2] + 2.0 * (k2[2] + k3[2]) + k4[2])
            d += h6 * (k1[3] + 2.0 * (k2[3] + k3[3]) + k4[3])
            rows.append((a, b, c, d))
            xs.append(a)
    except PriceSingularityError as exc:
        error = f"{exc} at t = {(len(rows) - 1) * h:.12g}"
    return _pack(rows, h, error)


def oscillation_metrics(traj: Trajectory, reference: Sequence[float], window: float,
                        tol: float = OSCILLATION_TOL) -> OscillationMetrics:
    """Classify the leader's output deviation over the trailing ``window``.

    Local extrema of x1(t) - x1* are collected and log|amplitude| is fitted
    linearly in time.  With fewer than four extrema the verdict is
    NonOscillatory and the rate comes from the window's endpoint ratio.
    """
    t = traj.times
    if window > t[-1] - t[0] + 1e-9 * max(1.0, abs(t[-1])):
        raise ValueError(f"window {window} exceeds trajectory span {t[-1] - t[0]}")
    start = int(np.searchsorted(t, t[-1] - window - 1e-9 * max(1.0, window)))
    tw = t[start:]
    dev = traj.states[start:, 0] - float(reference[0])

    # extrema below this are rounding noise around the reference
    floor = max(1e-13 * max(1.0, abs(float(reference[0]))),
                1e-10 * float(np.max(np.abs(dev), initial=0.0)))
    diff = np.diff(dev)
    turning = np.nonzero(diff[:-1] * diff[1:] < 0.0)[0] + 1
    turning = turning[np.abs(dev[turning]) > floor]
    amps = np.abs(dev[turning])
    times = tw[turning]

    if len(amps) < 4:
        first, last = abs(dev[0]), abs(dev[-1])
        span = tw[-1] - tw[0]
        if first > floor and last > floor and span > 0.0:
            rate = math.log(last / first) / span
        else:
            rate = 0.0
        return OscillationMetrics(amps.tolist(), times.tolist(), rate, Verdict.NON_OSCILLATORY)

    rate = float(np.polyfit(times, np.log(amps), 1)[0])
    if rate < -tol:
        verdict = Verdict.DECAYING
    elif rate > tol:
        verdict = Verdict.GROWING
    else:
        verdict = Verdict.SUSTAINED
    return OscillationMetrics(amps.tolist(), times.tolist(), rate, verdict)
