"""Weierstrass elliptic machinery for the curve Y^2 = X^3 - g2 X - g3.

The branch points e1 > e2 > e3 of a nondegenerate real O(4) multiplet give
half-periods

    omega = K(k)/sqrt(rho),   omega' = i K(k')/sqrt(rho),
    rho = e1 - e3,            k^2 = (e2 - e3)/rho,

with K computed by the arithmetic-geometric mean.  The eta-period comes
from the second-kind integral, eta' from the Legendre identity
omega' eta - omega eta' = i pi/2.  The same lattice uniformizes the cubic
through the standard Weierstrass functions with invariants (4 g2, 4 g3),
which is what the zeta-function cross-check of the third-kind pi-function
uses.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PinchedTorusError, PoleOnCycleError
from .invariants import o4_basic_invariants
from .multiplet import Multiplet
from .quadrature import tanh_sinh

__all__ = [
    "EllipticDual",
    "WeierstrassData",
    "abel_map",
    "agm_E",
    "agm_K",
    "differentials",
    "dual_periods",
    "from_modulus",
    "from_multiplet",
    "lambert_g2_g3_eta",
    "pi_function",
    "pi_function_zeta_route",
    "weierstrass_zeta",
]

DEGENERACY_TOL = 1e-12


def agm_K(k: float) -> float:
    """Complete elliptic integral K(k) by AGM iteration (modulus, not m)."""
    if not 0.0 <= k < 1.0:
        raise DomainError(f"modulus k={k} outside [0, 1)")
    a, b = 1.0, math.sqrt(1.0 - k * k)
    for _ in range(60):
        if abs(a - b) <= 4e-16 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (2.0 * a)


def agm_E(k: float) -> float:
    """Complete elliptic integral E(k) via the AGM c-sum."""
    if not 0.0 <= k < 1.0:
        raise DomainError(f"modulus k={k} outside [0, 1)")
    a, b = 1.0, math.sqrt(1.0 - k * k)
    csum = 0.5 * k * k
    power = 1.0
    for _ in range(60):
        c = 0.5 * (a - b)
        if abs(c) <= 4e-16 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        power *= 2.0
        csum += 0.5 * power * c * c
    return math.pi / (2.0 * a) * (1.0 - csum)


@dataclass(frozen=True)
class WeierstrassData:
    """Branch points, periods, eta-values, nomes and radii of one O(4) curve."""

    g2: float
    g3: float
    delta: float
    e1: float
    e2: float
    e3: float
    omega: float
    omega_prime: complex
    eta: float
    eta_prime: complex
    q: float
    q_prime: float
    r2: float
    r2_prime: float

    @property
    def rho(self) -> float:
        return self.e1 - self.e3

    @property
    def modulus(self) -> float:
        return math.sqrt((self.e2 - self.e3) / (self.e1 - self.e3))

    def cubic(self, x):
        return x**3 - self.g2 * x - self.g3


def from_modulus(rho: float, k: float) -> WeierstrassData:
    """Build the curve data from the Majorana scale and chordal modulus."""
    if rho <= 0:
        raise DomainError("rho must be positive")
    if not 0.0 < k < 1.0:
        raise DomainError("modulus must lie strictly inside (0, 1)")
    e1 = -(rho / 3.0) * (k * k - 2.0)
    e2 = (rho / 3.0) * (2.0 * k * k - 1.0)
    e3 = -(rho / 3.0) * (k * k + 1.0)
    return _assemble(e1, e2, e3)


def _assemble(e1: float, e2: float, e3: float) -> WeierstrassData:
    rho = e1 - e3
    k = math.sqrt((e2 - e3) / rho)
    kp = math.sqrt((e1 - e2) / rho)
    g2 = -(e1 * e2 + e2 * e3 + e3 * e1)
    g3 = e1 * e2 * e3
    delta = 4.0 * g2**3 - 27.0 * g3**2
    sr = math.sqrt(rho)
    big_k = agm_K(k)
    big_kp = agm_K(kp)
    big_e = agm_E(k)
    omega = big_k / sr
    omega_prime = 1j * big_kp / sr
    eta = sr * big_e - e1 * omega
    eta_prime = (omega_prime * eta - 0.5j * math.pi) / omega
    r2 = 1.0 / (2.0 * omega)
    r2p = float((1j * math.pi / (2.0 * omega_prime)).real)
    q = math.exp(-math.pi**2 * r2 / r2p)
    qp = math.exp(-r2p / r2)
    return WeierstrassData(
        g2, g3, delta, e1, e2, e3, omega, omega_prime, eta, eta_prime, q, qp, r2, r2p
    )


def from_multiplet(m: Multiplet) -> WeierstrassData:
    """Curve data of a real O(4) multiplet: g2 = g_rho2, g3 = g_rho3."""
    g2, g3 = o4_basic_invariants(m)
    return from_invariants(g2, g3)


def from_invariants(g2: float, g3: float) -> WeierstrassData:
    delta = 4.0 * g2**3 - 27.0 * g3**2
    scale = max(abs(g2) ** 3, g3**2, 1e-300)
    if delta <= DEGENERACY_TOL * scale:
        raise PinchedTorusError(
            f"discriminant {delta:.3e} vanishes within tolerance: pinched torus"
        )
    roots = np.sort(np.real(np.roots([1.0, 0.0, -g2, -g3])))[::-1]
    return _assemble(float(roots[0]), float(roots[1]), float(roots[2]))


# ---------------------------------------------------------------------------
# Lambert q-series
# ---------------------------------------------------------------------------

def _lambert_sum(q: float, power: int, order: int) -> float:
    total = 0.0
    for n in range(1, order + 1):
        qn = q ** (2 * n)
        total += n**power * qn / (1.0 - qn)
    return total


def lambert_g2_g3_eta(w: WeierstrassData, use_prime: bool = False, order: int = 12):
    """Truncated Lambert series for (g2, g3, eta).

    In the primed branch the modular-invariant series are evaluated in
    (omega', q'), which yields eta'; eta itself is then recovered through
    the Legendre identity.
    """
    if order < 0:
        raise DomainError("order must be nonnegative")
    if not use_prime:
        half, q = w.omega, w.q
    else:
        half, q = w.omega_prime, w.q_prime
    u = math.pi / (2.0 * half) if not use_prime else cmath.pi / (2.0 * half)
    g2_s = (1.0 / 3.0) * u**4 * (1.0 + 240.0 * _lambert_sum(q, 3, order))
    g3_s = (2.0 / 27.0) * u**6 * (1.0 - 504.0 * _lambert_sum(q, 5, order))
    eta_like = math.pi**2 / (12.0 * half) * (1.0 - 24.0 * _lambert_sum(q, 1, order))
    if use_prime:
        eta_s = (0.5j * math.pi + w.omega * eta_like) / w.omega_prime
    else:
        eta_s = eta_like
    return _real_if_close(g2_s), _real_if_close(g3_s), _real_if_close(eta_s)


def _real_if_close(z, tol=1e-9):
    z = complex(z)
    if abs(z.imag) <= tol * max(1.0, abs(z.real)):
        return z.real
    return z


# ---------------------------------------------------------------------------
# third-kind pi-function
# ---------------------------------------------------------------------------

def _y_plus(w: WeierstrassData, x: float) -> float:
    """Positive branch sqrt((e1-X)(e2-X)(X-e3)) on the segment (e3, e2)."""
    return math.sqrt(max((w.e1 - x) * (w.e2 - x) * (x - w.e3), 0.0))


def y0_value(w: WeierstrassData, x0: float, y0_sign: int) -> complex:
    """Y0 on the cubic at X0 with the caller's sign; imaginary off the oval."""
    c = w.cubic(x0)
    if c >= 0.0:
        return y0_sign * math.sqrt(c)
    return y0_sign * 1j * math.sqrt(-c)


def pi_function(w: WeierstrassData, x0: float, y0_sign: int = 1, tol: float = 1e-12) -> complex:
    """Third-kind period pi(X0) = -int_{e2}^{e3} (Y0/(X-X0)) dX/(2Y).

    Evaluated on the real oval [e3, e2] with the branch of Y that makes
    omega = K/sqrt(rho) positive.  The substitution X = e3 + (e2-e3)
    sin^2(theta) removes both square-root endpoints, leaving
    dX/(2Y) = dtheta/sqrt(e1 - X).  For X0 inside the oval the integral is
    the real principal value (the pole carries coefficient Y0/(2Y(X0)) =
    +-1/2, subtracted analytically); outside, Y0 is imaginary on (e2, e1)
    and below e3, making pi purely imaginary there.
    """
    if y0_sign not in (1, -1):
        raise DomainError("y0_sign must be +1 or -1")
    gap = min(abs(x0 - w.e1), abs(x0 - w.e2), abs(x0 - w.e3))
    if gap <= 1e-10 * max(1.0, w.rho):
        raise PoleOnCycleError(f"X0={x0} sits on a branch point")
    y0 = y0_value(w, x0, y0_sign)
    e1, e2, e3 = w.e1, w.e2, w.e3
    span = e2 - e3

    def x_of(theta):
        return e3 + span * math.sin(theta) ** 2

    if e3 < x0 < e2:
        # principal value in theta; the subtracted pole term integrates to
        # c * log((pi/2 - th0)/th0) with c = Y0 / (X'(th0) sqrt(e1 - X0))
        th0 = math.asin(math.sqrt((x0 - e3) / span))
        ee = e1 - x0
        f0 = y0 / math.sqrt(ee)
        gp = span * math.sin(2.0 * th0)
        gpp = 2.0 * span * math.cos(2.0 * th0)
        c = f0 / gp
        # Taylor series of (h - c/(theta - th0)) about the pole, to first order
        a_c = gpp / (2.0 * gp)
        fp0 = gp * f0 / (2.0 * ee)
        fpp0 = f0 * (gpp / (2.0 * ee) + 3.0 * gp * gp / (4.0 * ee * ee))
        lim0 = (fp0 - a_c * f0) / gp
        lim1 = (0.5 * fpp0 - a_c * fp0 + (a_c * a_c + 2.0 / 3.0) * f0) / gp

        def integrand(theta):
            delta = theta - th0
            if abs(delta) < 3e-6:
                return lim0 + lim1 * delta
            x = x_of(theta)
            return y0 / ((x - x0) * math.sqrt(e1 - x)) - c / delta

        value = tanh_sinh(integrand, 0.0, 0.5 * math.pi, tol=tol) + c * math.log(
            (0.5 * math.pi - th0) / th0
        )
    else:

        def integrand(theta):
            x = x_of(theta)
            return y0 / ((x - x0) * math.sqrt(e1 - x))

        value = tanh_sinh(integrand, 0.0, 0.5 * math.pi, tol=tol)
    return -complex(value)


def weierstrass_zeta(u, w: WeierstrassData, max_order: int = 400) -> complex:
    """Weierstrass zeta of the lattice (2 omega, 2 omega') by its q-series.

    Valid for |Im u| < 2 |omega'|; terms decay like q^(2n) e^(n pi |Im u|/omega),
    so the sum is cut adaptively.
    """
    u = complex(u)
    om = w.omega
    z = (w.eta / om) * u + (math.pi / (2.0 * om)) / cmath.tan(math.pi * u / (2.0 * om))
    scale = max(1.0, abs(z))
    for n in range(1, max_order + 1):
        qn = w.q ** (2 * n)
        term = (2.0 * math.pi / om) * qn / (1.0 - qn) * cmath.sin(n * math.pi * u / om)
        z += term
        if abs(term) < 1e-16 * scale and n > 4:
            break
    return z


def abel_map(w: WeierstrassData, x0: float, y0_sign: int = 1, tol: float = 1e-12) -> complex:
    """Abel image u0 of (X0, Y0): du = dX/(2Y) from the point to infinity.

    Piecewise over the real components, using u(e1) = omega, u(e2) =
    omega + omega', u(e3) = omega'.  Square-root endpoints are removed by
    u^2 substitutions toward the adjacent branch point and (u/(1-u))^2
    toward infinity.  The y0_sign selects between +-u0.
    """
    e1, e2, e3 = w.e1, w.e2, w.e3

    def to_branch_point(a, e, others):
        # int between a and the branch point e of dX/(2 sqrt(|cubic|));
        # X = e - span u^2 cancels the sqrt zero at e analytically
        span = e - a

        def f(u):
            x = e - span * u * u
            prod = abs((x - others[0]) * (x - others[1]))
            return math.sqrt(abs(span) / prod)

        return tanh_sinh(f, 0.0, 1.0, tol=tol).real

    def to_infinity(a, sign):
        # X = a + sign*(u/(1-u))^2 regularizes both X=a and X=inf
        def f(u):
            r = u / (1.0 - u)
            x = a + sign * r * r
            prod = abs((x - e1) * (x - e2) * (x - e3))
            return abs(r / (1.0 - u) ** 2) / math.sqrt(prod)

        return tanh_sinh(f, 0.0, 1.0, tol=tol).real

    # each region carries its own orientation so that (X0, +Y0) matches the
    # principal-value quadrature convention of pi_function
    if x0 > e1:
        u0 = complex(-to_infinity(x0, 1.0))
    elif x0 > e2:
        u0 = w.omega + 1j * to_branch_point(x0, e1, (e2, e3))
    elif x0 > e3:
        u0 = w.omega + w.omega_prime - to_branch_point(x0, e2, (e1, e3))
    else:
        u0 = -1j * to_infinity(x0, -1.0)
    return u0 if y0_sign > 0 else -u0


def infinity_point_pi(w: WeierstrassData, z2: complex, v2: complex, x2: float):
    """Third-kind values at the infinity points of the O(4) curve.

    The closed forms for the I^(1) family and the F-function involve
    pi at x_pm = (x2 +- 6|z2|)/3 with an orientation the notation hides.
    The convention frozen here (calibrated against branch-tracked contour
    quadrature, with sqrt(z2) principal) is

        Pi+ = s+ (pi(x+) - i pi/2),   s+ = sign(Im(v2/sqrt(z2)))
        Pi- = s-  pi(x-),             s- = -sign(Re(v2/sqrt(z2)))

    with pi(x) evaluated at y0_sign = +1.  x+ always lies in (e2, e1), so
    Pi+ is purely imaginary; x- lies inside the oval (e3, e2) where pi is
    the real principal value.  Identities holding "mod i pi" retain a rare
    residual half-lattice slip which callers account for.
    """
    if z2 == 0:
        raise DomainError("infinity-point pi values need z2 != 0")
    v = v2 / cmath.sqrt(z2)
    s_plus = 1.0 if v.imag >= 0 else -1.0
    s_minus = -1.0 if v.real >= 0 else 1.0
    x_plus = (x2 + 6.0 * abs(z2)) / 3.0
    x_minus = (x2 - 6.0 * abs(z2)) / 3.0
    pi_plus = s_plus * (pi_function(w, x_plus, 1) - 0.5j * math.pi)
    pi_minus = s_minus * pi_function(w, x_minus, 1)
    return pi_plus, pi_minus


def pi_function_zeta_route(w: WeierstrassData, x0: float, y0_sign: int = 1) -> complex:
    """Independent pi(X0) via the determinant form u0 eta - omega zeta(u0).

    On the inner segment (e3, e2) the determinant form exceeds the real
    principal value by i pi/2 (a half-period eta-shift); that constant is
    removed here so both routes agree everywhere.
    """
    u0 = abel_map(w, x0, y0_sign)
    value = u0 * w.eta - w.omega * weierstrass_zeta(u0, w)
    if w.e3 < x0 < w.e2:
        value -= y0_sign * 0.5j * math.pi
    return value


# ---------------------------------------------------------------------------
# dual periods and differentiation formulas
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EllipticDual:
    eta_star: float
    omega_star: float


def dual_periods(w: WeierstrassData) -> EllipticDual:
    """eta* = (2 g2^2 omega - 9 g3 eta)/Delta, omega* = (3 g3 omega - 2 g2 eta)/Delta."""
    if w.delta == 0:
        raise PinchedTorusError("dual periods undefined at Delta = 0")
    eta_star = (2.0 * w.g2**2 * w.omega - 9.0 * w.g3 * w.eta) / w.delta
    omega_star = (3.0 * w.g3 * w.omega - 2.0 * w.g2 * w.eta) / w.delta
    return EllipticDual(eta_star, omega_star)


@dataclass(frozen=True)
class Differentials:
    """Closed-form sensitivities of omega, eta and pi to (g2, g3)."""

    w: WeierstrassData
    dual: EllipticDual

    def d_omega(self, dg2: float, dg3: float) -> float:
        return 0.5 * (3.0 * self.dual.omega_star * dg3 - self.dual.eta_star * dg2)

    def d_eta(self, dg2: float, dg3: float) -> float:
        return 0.5 * (
            self.dual.eta_star * dg3 - self.w.g2 * self.dual.omega_star * dg2
        )

    def d_pi(self, x0: float, y0_sign: int, dx: float, dg2: float, dg3: float) -> complex:
        w, dual = self.w, self.dual
        y0 = y0_value(w, x0, y0_sign)
        term_x = (w.eta + x0 * w.omega) / (2.0 * y0) * dx
        term_g2 = (
            ((w.g2 * x0 + 3.0 * w.g3) * dual.omega_star - x0**2 * dual.eta_star)
            / (2.0 * y0)
            * dg2
        )
        term_g3 = (
            ((3.0 * x0**2 - 2.0 * w.g2) * dual.omega_star - x0 * dual.eta_star)
            / (2.0 * y0)
            * dg3
        )
        return term_x + term_g2 + term_g3


def differentials(w: WeierstrassData) -> Differentials:
    return Differentials(w, dual_periods(w))
