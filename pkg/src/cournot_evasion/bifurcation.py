"""Imaginary-axis crossings of P(lambda) + Q(lambda)*exp(-lambda*tau).

For a crossing at lambda = i*omega the moduli must agree, |P(i w)| = |Q(i w)|,
which is a quartic in y = w**2.  Each positive root gives a frequency, the
phase of -P/Q gives the delay, and implicit differentiation gives the
direction in which the root moves as tau increases.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import AdjustmentSpeeds
from .errors import DegenerateCrossingError
from .linear import (CharPolyNoDelay, DelayCharCoefficients, RouthHurwitzReport,
                     linearize, polynomial_roots, routh_hurwitz)
from .model import ModelParams

# |Q(i w)| below this (relative to |P(i w)| + 1e-300) means no usable phase
DEGENERATE_Q = 1e-14
DEGENERATE_TRANSVERSALITY = 1e-12


class Classification(str, enum.Enum):
    STABLE_FOR_ALL_DELAYS = "StableForAllDelays"
    STABLE_UNTIL_TAU0 = "StableUntilTau0"
    UNSTABLE_AT_ZERO_DELAY = "UnstableAtZeroDelay"


@dataclass(frozen=True)
class OmegaPolynomial:
    """w**8 + r6*w**6 + r4*w**4 + r2*w**2 + r0, i.e. |P(i w)|**2 - |Q(i w)|**2."""

    r6: float
    r4: float
    r2: float
    r0: float

    def in_y(self) -> np.ndarray:
        return np.array([1.0, self.r6, self.r4, self.r2, self.r0])

    def __call__(self, omega):
        return np.polyval(self.in_y(), np.square(omega))


@dataclass(frozen=True)
class ImaginaryAxisEvaluation:
    a1: float  # Re P(i w)
    a2: float  # Im P(i w)
    a3: float  # -Re Q(i w)
    a4: float  # Im Q(i w)

    @property
    def P(self) -> complex:
        return complex(self.a1, self.a2)

    @property
    def Q(self) -> complex:
        return complex(-self.a3, self.a4)


@dataclass(frozen=True)
class Crossing:
    omega: float
    tau: float
    evaluation: ImaginaryAxisEvaluation
    residual: float  # |P(i w) + Q(i w) exp(-i w tau)|

    def ladder(self, j: int) -> float:
        """Delay of the j-th later crossing at the same frequency."""
        return self.tau + 2.0 * math.pi * j / self.omega


@dataclass
class HopfAnalysis:
    classification: Classification
    omega0: float | None = None
    tau0: float | None = None
    transversality: float | None = None
    transversality_sign: int | None = None
    crossings: list[Crossing] = field(default_factory=list)
    routh_hurwitz: RouthHurwitzReport | None = None
    char_poly: CharPolyNoDelay | None = None
    delay_coefficients: DelayCharCoefficients | None = None
    omega_polynomial: OmegaPolynomial | None = None

    @property
    def residual(self) -> float | None:
        for c in self.crossings:
            if c.tau == self.tau0:
                return c.residual
        return None


def omega_polynomial(n: DelayCharCoefficients) -> OmegaPolynomial:
    return OmegaPolynomial(
        r6=n.n43**2 - 2.0 * n.n42,
        r4=n.n42**2 + 2.0 * n.n40 - 2.0 * n.n43 * n.n41 - n.n22**2,
        r2=n.n41**2 - 2.0 * n.n42 * n.n40 + 2.0 * n.n22 * n.n20 - n.n21**2,
        r0=n.n40**2 - n.n20**2,
    )


def crossing_frequencies(r: OmegaPolynomial) -> list[float]:
    """Ascending positive w with |P(i w)| = |Q(i w)|."""
    ys = polynomial_roots(r.in_y())
    found: list[float] = []
    for y in ys:
        if abs(y.imag) < 1e-9 * (1.0 + abs(y)) and y.real > 1e-12:
            w = math.sqrt(y.real)
            if not any(abs(w - v) <= 1e-10 * max(1.0, w) for v in found):
                found.append(w)
    return sorted(found)


def imaginary_axis_evaluation(n: DelayCharCoefficients, omega: float) -> ImaginaryAxisEvaluation:
    w = omega
    return ImaginaryAxisEvaluation(
        a1=w**4 - n.n42 * w**2 + n.n40,
        a2=-n.n43 * w**3 + n.n41 * w,
        a3=n.n22 * w**2 - n.n20,
        a4=n.n21 * w,
    )


def critical_delay(n: DelayCharCoefficients, omega0: float) -> Crossing:
    """Smallest tau > 0 putting i*omega0 on the characteristic curve.

    exp(-i w tau) = -P(i w)/Q(i w) fixes cos(w tau) and sin(w tau); the
    angle is recovered with atan2 so no branch has to be guessed.
    """
    if not omega0 > 0.0:
        raise ValueError(f"omega0 must be > 0, got {omega0}")
    ev = imaginary_axis_evaluation(n, omega0)
    a1, a2, a3, a4 = ev.a1, ev.a2, ev.a3, ev.a4
    den = a3 * a3 + a4 * a4
    if math.sqrt(den) <= DEGENERATE_Q * (abs(ev.P) + 1e-300):
        raise DegenerateCrossingError(f"degenerate crossing: Q(i*{omega0}) vanishes")
    cos_wt = (a1 * a3 - a2 * a4) / den
    sin_wt = -(a1 * a4 + a2 * a3) / den
    angle = math.atan2(sin_wt, cos_wt) % (2.0 * math.pi)
    if angle <= 0.0:
        angle = 2.0 * math.pi
    tau = angle / omega0
    lam = 1j * omega0
    residual = abs(ev.P + ev.Q * cmath.exp(-lam * tau))
    return Crossing(omega0, tau, ev, residual)


def dlambda_dtau(n: DelayCharCoefficients, lam: complex, tau: float) -> complex:
    """Root velocity from implicit differentiation of P + Q*exp(-lambda*tau) = 0."""
    E = cmath.exp(-lam * tau)
    Qv = n.Q(lam)
    den = n.dP(lam) + (n.dQ(lam) - tau * Qv) * E
    if abs(den) < DEGENERATE_TRANSVERSALITY:
        raise DegenerateCrossingError(f"degenerate transversality at lambda={lam}, tau={tau}")
    return lam * Qv * E / den


def transversality(n: DelayCharCoefficients, omega0: float, tau0: float) -> float:
    """Re(d lambda / d tau) at lambda = i*omega0, tau = tau0."""
    return dlambda_dtau(n, 1j * omega0, tau0).real


def classify(params: ModelParams, speeds: AdjustmentSpeeds) -> HopfAnalysis:
    _, _, poly, n = linearize(params, speeds)
    rh = routh_hurwitz(poly)
    r = omega_polynomial(n)
    out = HopfAnalysis(Classification.UNSTABLE_AT_ZERO_DELAY, routh_hurwitz=rh,
                       char_poly=poly, delay_coefficients=n, omega_polynomial=r)
    if not rh.stable:
        return out
    out.crossings = [critical_delay(n, w) for w in crossing_frequencies(r)]
    if not out.crossings:
        out.classification = Classification.STABLE_FOR_ALL_DELAYS
        return out
    first = min(out.crossings, key=lambda c: c.tau)
    out.omega0, out.tau0 = first.omega, first.tau
    out.transversality = transversality(n, first.omega, first.tau)
    out.transversality_sign = int(np.sign(out.transversality))
    out.classification = Classification.STABLE_UNTIL_TAU0
    return out
