"""Static Cournot duopoly with ad valorem tax evasion.

Specialised to inverse demand p(X) = 1/X, penalty F(e) = s*t1*e**2/2 and
linear costs C_i(x) = c_i*x.  Everything here is a pure function of a
:class:`ModelParams` value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

from .errors import ParameterError, PriceSingularityError

# relative slack when judging z* >= 0 right at the feasibility boundary
FEASIBILITY_RTOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    q: float  # detection probability
    s: float  # penalty scale
    t1: float  # ad valorem tax rate
    c1: float
    c2: float

    def __post_init__(self):
        for name in ("q", "s", "t1", "c1", "c2"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ParameterError(name, f"expected a number, got {value!r}")
            if not math.isfinite(value):
                raise ParameterError(name, "must be finite")
        if not 0.0 < self.q <= 1.0:
            raise ParameterError("q", f"detection probability must lie in (0, 1], got {self.q}")
        if self.s < 1.0:
            raise ParameterError("s", f"penalty scale must be >= 1, got {self.s}")
        if not 0.0 < self.t1 < 1.0:
            raise ParameterError("t1", f"tax rate must lie in (0, 1), got {self.t1}")
        if self.c1 <= 0.0:
            raise ParameterError("c1", f"marginal cost must be > 0, got {self.c1}")
        if self.c2 <= 0.0:
            raise ParameterError("c2", f"marginal cost must be > 0, got {self.c2}")

    @property
    def qst1(self) -> float:
        """Curvature of the expected penalty, q*s*t1."""
        return self.q * self.s * self.t1

    @property
    def evaded(self) -> float:
        """Evaded revenue at which the declaration first-order condition holds."""
        return (1.0 - self.q) / (self.q * self.s)


class MarketState(NamedTuple):
    x1: float
    x2: float
    z1: float
    z2: float


@dataclass(frozen=True)
class Primitives:
    p: float
    dp: float
    d2p: float
    F: float
    dF: float
    C1: float
    C2: float


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    lower: float  # admissible c2 interval [lower, upper]
    upper: float
    reason: str = ""


@dataclass(frozen=True)
class EquilibriumReport:
    state: MarketState
    evaded: float
    feasible: bool
    profits: tuple[float, float]


@dataclass(frozen=True)
class SweepRow:
    s_value: float
    z1_star: float
    z2_star: float
    p1_star: float
    p2_star: float
    feasible: bool


def _total(x_total: float) -> float:
    if not x_total > 0.0:
        raise PriceSingularityError(f"price singularity: total output {x_total!r} <= 0")
    return x_total


def price(x_total: float) -> float:
    return 1.0 / _total(x_total)


def evaluate_primitives(x_total: float, evasion: float, output: float,
                        params: ModelParams) -> Primitives:
    """Price, its first two derivatives, penalty, marginal penalty and costs.

    ``output`` is fed to both cost functions, so ``C1``/``C2`` are the costs
    each firm would incur producing that quantity.
    """
    X = _total(x_total)
    st1 = params.s * params.t1
    return Primitives(
        p=1.0 / X,
        dp=-1.0 / X**2,
        d2p=2.0 / X**3,
        F=0.5 * st1 * evasion**2,
        dF=st1 * evasion,
        C1=params.c1 * output,
        C2=params.c2 * output,
    )


def profit(firm: int, state: Sequence[float], params: ModelParams) -> float:
    """Expected profit of ``firm`` (1 or 2) over detection outcomes."""
    x1, x2, z1, z2 = state
    p = price(x1 + x2)
    if firm == 1:
        x, z, c = x1, z1, params.c1
    elif firm == 2:
        x, z, c = x2, z2, params.c2
    else:
        raise ValueError(f"firm must be 1 or 2, got {firm!r}")
    q, t1 = params.q, params.t1
    revenue = x * p
    penalty = 0.5 * params.s * t1 * (revenue - z) ** 2
    undetected = revenue - c * x - t1 * z
    detected = (1.0 - t1) * revenue - c * x - penalty
    return (1.0 - q) * undetected + q * detected


def foc_residual(state: Sequence[float], params: ModelParams) -> tuple[float, float, float, float]:
    """Marginal profits (dP1/dx1, dP2/dx2, dP1/dz1, dP2/dz2).

    Output conditions subtract the marginal cost c_i, not the cost level.
    """
    x1, x2, z1, z2 = state
    X = _total(x1 + x2)
    p, dp = 1.0 / X, -1.0 / X**2
    q, t1, qst1 = params.q, params.t1, params.qst1
    e1 = x1 * p - z1
    e2 = x2 * p - z2
    return (
        (1.0 - q * t1 - qst1 * e1) * (p + x1 * dp) - params.c1,
        (1.0 - q * t1 - qst1 * e2) * (p + x2 * dp) - params.c2,
        -(1.0 - q) * t1 + qst1 * e1,
        -(1.0 - q) * t1 + qst1 * e2,
    )


def feasibility_check(params: ModelParams) -> FeasibilityReport:
    q, c1, c2 = params.q, params.c1, params.c2
    margin = q * params.s + q - 1.0
    if margin <= 0.0:
        return FeasibilityReport(False, math.inf, -math.inf,
                                 "declaration nonnegativity unattainable (qs + q - 1 <= 0)")
    lower = (1.0 - q) * c1 / margin
    upper = margin * c1 / (1.0 - q) if q < 1.0 else math.inf
    ok = lower * (1.0 - FEASIBILITY_RTOL) <= c2 <= upper * (1.0 + FEASIBILITY_RTOL)
    reason = "" if ok else f"c2 = {c2} outside [{lower}, {upper}]"
    return FeasibilityReport(ok, lower, upper, reason)


def equilibrium_state(params: ModelParams) -> MarketState:
    c1, c2, t1 = params.c1, params.c2, params.t1
    cs = c1 + c2
    e = params.evaded
    return MarketState(c2 * (1.0 - t1) / cs**2, c1 * (1.0 - t1) / cs**2,
                       c2 / cs - e, c1 / cs - e)


def equilibrium(params: ModelParams) -> EquilibriumReport:
    state = equilibrium_state(params)
    return EquilibriumReport(
        state=state,
        evaded=params.evaded,
        feasible=feasibility_check(params).feasible,
        profits=(profit(1, state, params), profit(2, state, params)),
    )


def static_sweep(params_base: ModelParams, s_grid: Sequence[float]) -> list[SweepRow]:
    rows = []
    for s in s_grid:
        report = equilibrium(replace(params_base, s=float(s)))
        st = report.state
        rows.append(SweepRow(float(s), st.z1, st.z2, report.profits[0],
                             report.profits[1], report.feasible))
    return rows
