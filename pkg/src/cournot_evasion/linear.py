"""Linearisation at the stationary state and the tau = 0 stability test.

Characteristic coefficients are always extracted from the Jacobian matrix
(principal-minor sums, cofactor polynomials) rather than from hand-expanded
closed forms.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .dynamics import AdjustmentSpeeds
from .errors import RootFindingError
from .model import ModelParams, equilibrium_state

# entry of the Jacobian that carries the delayed leader output (row x2, column x1)
DELAYED_ENTRY = (1, 0)


@dataclass(frozen=True)
class JacobianCoefficients:
    """Partial derivatives of the marginal-profit rows at the stationary state.

    Naming follows the row letter (a: x1, b: x2, c: z1, d: z2) and a
    positional code for the column: ``10`` -> x1, ``01`` -> x2 and ``001``
    -> the firm's own declaration.  Speeds are not included.
    """

    a10: float
    a01: float
    a001: float
    b10: float
    b01: float
    b001: float
    c10: float
    c01: float
    c001: float
    d10: float
    d01: float
    d001: float

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class CharPolyNoDelay:
    """lambda**4 + m43*lambda**3 + m42*lambda**2 + m41*lambda + m40."""

    m43: float
    m42: float
    m41: float
    m40: float

    def coefficients(self) -> np.ndarray:
        return np.array([1.0, self.m43, self.m42, self.m41, self.m40])

    def __call__(self, lam):
        return np.polyval(self.coefficients(), lam)


@dataclass(frozen=True)
class DelayCharCoefficients:
    """P(lambda) + Q(lambda) * exp(-lambda*tau) with monic quartic P, quadratic Q."""

    n43: float
    n42: float
    n41: float
    n40: float
    n22: float
    n21: float
    n20: float

    def P(self, lam):
        return (((lam + self.n43) * lam + self.n42) * lam + self.n41) * lam + self.n40

    def dP(self, lam):
        return ((4.0 * lam + 3.0 * self.n43) * lam + 2.0 * self.n42) * lam + self.n41

    def Q(self, lam):
        return (self.n22 * lam + self.n21) * lam + self.n20

    def dQ(self, lam):
        return 2.0 * self.n22 * lam + self.n21

    def characteristic(self, lam, tau: float):
        return self.P(lam) + self.Q(lam) * np.exp(-lam * tau)

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class RouthHurwitzReport:
    d1: float
    d2: float
    d3: float
    d4: float
    stable: bool


def jacobian_coefficients(params: ModelParams) -> JacobianCoefficients:
    x1, x2, _, _ = equilibrium_state(params)
    X = x1 + x2
    dp, d2p = -1.0 / X**2, 2.0 / X**3
    c1, c2, t1 = params.c1, params.c2, params.t1
    Q = params.qst1
    u = 1.0 - t1
    return JacobianCoefficients(
        a10=-Q * c1**2 / u**2 + u * (2.0 * dp + x1 * d2p),
        a01=-Q * x1 * dp * c1 / u + u * (dp + x1 * d2p),
        a001=Q * c1 / u,
        b10=-Q * x2 * dp * c2 / u + u * (dp + x2 * d2p),
        b01=-Q * c2**2 / u**2 + u * (2.0 * dp + x2 * d2p),
        b001=Q * c2 / u,
        c10=Q * c1 / u,
        c01=Q * x1 * dp,
        c001=-Q,
        d10=Q * x2 * dp,
        d01=Q * c2 / u,
        d001=-Q,
    )


def jacobian_matrix(coeffs: JacobianCoefficients, speeds: AdjustmentSpeeds) -> np.ndarray:
    g = coeffs
    k1, k2, h1, h2 = speeds.as_tuple()
    return np.array([
        [k1 * g.a10, k1 * g.a01, k1 * g.a001, 0.0],
        [k2 * g.b10, k2 * g.b01, 0.0, k2 * g.b001],
        [h1 * g.c10, h1 * g.c01, h1 * g.c001, 0.0],
        [h2 * g.d10, h2 * g.d01, 0.0, h2 * g.d001],
    ])


def _det(m) -> float:
    """Determinant by cofactor expansion; exact term structure, no pivoting."""
    n = len(m)
    if n == 0:
        return 1.0
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = 0.0
    for j in range(n):
        if m[0][j] == 0.0:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * m[0][j] * _det(minor)
    return total


def char_poly_no_delay(matrix) -> CharPolyNoDelay:
    """Coefficients of det(lambda*I - J) via sums of principal minors."""
    J = [list(map(float, row)) for row in np.asarray(matrix, dtype=float)]
    n = len(J)
    if n != 4:
        raise ValueError(f"expected a 4x4 matrix, got {n}x{n}")
    sums = []
    for k in (1, 2, 3, 4):
        s = 0.0
        for idx in itertools.combinations(range(n), k):
            s += _det([[J[r][c] for c in idx] for r in idx])
        sums.append(s)
    e1, e2, e3, e4 = sums
    return CharPolyNoDelay(m43=-e1, m42=e2, m41=-e3, m40=e4)


def routh_hurwitz(poly: CharPolyNoDelay) -> RouthHurwitzReport:
    m43, m42, m41, m40 = poly.m43, poly.m42, poly.m41, poly.m40
    d1 = m43
    d2 = m43 * m42 - m41
    d3 = m41 * d2 - m43**2 * m40
    d4 = m40 * d3
    return RouthHurwitzReport(d1, d2, d3, d4, bool(d1 > 0 and d2 > 0 and d3 > 0 and d4 > 0))


def polynomial_roots(coeffs, max_polish: int = 50, rtol: float = 1e-9) -> np.ndarray:
    """All complex roots of a polynomial given highest power first.

    Eigenvalues of the companion matrix seed a few safeguarded Newton steps.
    A root whose residual stays above ``rtol * max(1, |z|**deg)`` times the
    coefficient scale raises :class:`RootFindingError`.
    """
    c = np.asarray(coeffs, dtype=float)
    if c.ndim != 1 or len(c) < 2 or c[0] == 0.0:
        raise ValueError("need at least degree 1 with a nonzero leading coefficient")
    c = c / c[0]
    deg = len(c) - 1
    if not np.all(np.isfinite(c)):
        raise RootFindingError("non-finite polynomial coefficients")

    companion = np.zeros((deg, deg))
    companion[0, :] = -c[1:]
    companion[1:, :-1] = np.eye(deg - 1)
    try:
        roots = np.linalg.eigvals(companion).astype(complex)
    except np.linalg.LinAlgError as exc:
        raise RootFindingError(f"companion eigenvalues did not converge: {exc}") from exc

    dc = np.polyder(c)
    scale = max(1.0, float(np.max(np.abs(c[1:]))))
    for i, z in enumerate(roots):
        val = np.polyval(c, z)
        for _ in range(max_polish):
            d = np.polyval(dc, z)
            if d == 0:
                break
            trial = z - val / d
            tval = np.polyval(c, trial)
            if not abs(tval) < abs(val):
                break
            z, val = trial, tval
        if abs(val) > rtol * scale * max(1.0, abs(z) ** deg):
            raise RootFindingError(f"root {z} has residual {abs(val):.3g}")
        # keep exactly real roots real
        if z.imag != 0.0 and abs(z.imag) <= 1e-14 * max(1.0, abs(z.real)):
            partner = np.abs(roots - np.conj(z))
            partner[i] = np.inf
            if partner.min() > 1e-6 * max(1.0, abs(z)):
                z = complex(z.real, 0.0)
        roots[i] = z
    return roots


def eigenvalue_oracle(poly: CharPolyNoDelay) -> np.ndarray:
    """Roots of the tau = 0 characteristic quartic, sorted by real part (descending)."""
    roots = polynomial_roots(poly.coefficients())
    return roots[np.lexsort((roots.imag, -roots.real))]


def _poly_det(m) -> np.ndarray:
    """Determinant of a small matrix of polynomials (coefficients, lowest power first)."""
    n = len(m)
    if n == 1:
        return np.asarray(m[0][0], dtype=float)
    total = np.zeros(1)
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = npoly.polymul(m[0][j], _poly_det(minor))
        total = npoly.polyadd(total, term if j % 2 == 0 else -term)
    return total


def _padded(c: np.ndarray, length: int) -> np.ndarray:
    out = np.zeros(length)
    c = npoly.polytrim(c) if np.any(c) else np.zeros(1)
    out[: len(c)] = c
    return out


def delay_split(coeffs: JacobianCoefficients, speeds: AdjustmentSpeeds) -> DelayCharCoefficients:
    """Split det(lambda*I - J0 - exp(-lambda*tau)*J1) into P + Q*exp(-lambda*tau).

    J1 holds only the delayed entry k2*b10; the determinant is linear in that
    entry, so Q is minus the entry times its cofactor in lambda*I - J0.
    """
    J0 = jacobian_matrix(coeffs, speeds)
    r, c = DELAYED_ENTRY
    delayed = J0[r, c]
    J0[r, c] = 0.0
    P = char_poly_no_delay(J0)

    # lambda*I - J0 as a matrix of polynomials, lowest power first
    M = [[np.array([-J0[i, j], 1.0]) if i == j else np.array([-J0[i, j]]) for j in range(4)]
         for i in range(4)]
    minor = [row[:c] + row[c + 1:] for k, row in enumerate(M) if k != r]
    cofactor = (-1) ** (r + c) * _poly_det(minor)
    n20, n21, n22 = _padded(-delayed * cofactor, 3)[:3]
    return DelayCharCoefficients(P.m43, P.m42, P.m41, P.m40, float(n22), float(n21), float(n20))


def linearize(params: ModelParams, speeds: AdjustmentSpeeds):
    """Convenience bundle: coefficients, matrix, tau=0 polynomial and the delay split."""
    coeffs = jacobian_coefficients(params)
    J = jacobian_matrix(coeffs, speeds)
    return coeffs, J, char_poly_no_delay(J), delay_split(coeffs, speeds)
