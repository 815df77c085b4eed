"""The two Swann-bundle constructions.

O(2)+O(2): closed-form F, its x-derivative displays, the hyperkahler
potential K = -2 (r1 x r2)^2 / r2^3 and the Gibbons-Hawking Higgs matrix
with its closed-form gradients.

O(2)+O(4): the F-function assembled from (omega, eta, pi(x+-)), its three
first derivatives, the Legendre constraint dF/dx2 = 0 solved for the
auxiliary coordinate x2, the compact SO(3)-invariant potential, and the
asymptotic q/q'-series of the constraint and the potential together with
numeric sweep/fit companions.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .elliptic import (
    EllipticDual,
    WeierstrassData,
    dual_periods,
    from_invariants,
    infinity_point_pi,
)
from .errors import DomainError, NoSolutionError, UnsolvedStateError
from .invariants import (
    g_sigma2,
    mixed_invariants,
    o4_basic_invariants,
)
from .multiplet import (
    Multiplet,
    o2_coefficients,
    o2_multiplet,
    o2_to_vector,
    o4_coefficients,
    o4_multiplet,
    vector_to_o2,
)

__all__ = [
    "O2O4Aux",
    "ba_from_curve",
    "ba_series",
    "degenerate_limit_report",
    "fit_exponential_coefficients",
    "k_series",
    "o2o2_f",
    "o2o2_higgs",
    "o2o2_higgs_gradients",
    "o2o2_potential",
    "o2o2_x_derivative_displays",
    "o2o4_f",
    "o2o4_gradients",
    "o2o4_k_mixed",
    "o2o4_potential",
    "o2o4_potential_assembly",
    "scaled_pair",
    "solve_constraint",
]


# ---------------------------------------------------------------------------
# O(2) + O(2)
# ---------------------------------------------------------------------------

def _o2o2_data(m1: Multiplet, m2: Multiplet):
    z1, x1 = o2_coefficients(m1)
    z2, x2 = o2_coefficients(m2)
    r1 = o2_to_vector(m1)
    r2 = o2_to_vector(m2)
    return z1, x1, z2, x2, r1, r2


def o2o2_f(m1: Multiplet, m2: Multiplet) -> float:
    """Closed-form F of the O(2)+O(2) model (residue evaluation)."""
    z1, x1, z2, x2, r1, r2 = _o2o2_data(m1, m2)
    if abs(z2) == 0:
        raise DomainError("F needs z2 != 0; rotate the pair first")
    r2n = float(np.linalg.norm(r2))
    dot = float(r1 @ r2)
    r1sq = float(r1 @ r1)
    cross = (z1 * z2.conjugate() - z2 * z1.conjugate()) ** 2  # real and <= 0
    return (r1sq * r2n**2 - dot**2) / (2 * r2n * abs(z2) ** 2) + r2n * cross.real / abs(
        z2
    ) ** 4


def o2o2_x_derivative_displays(m1: Multiplet, m2: Multiplet):
    """(x1 dF/dx1, x2 dF/dx2) in closed form."""
    z1, x1, z2, x2, r1, r2 = _o2o2_data(m1, m2)
    r2n = float(np.linalg.norm(r2))
    dot = float(r1 @ r2)
    r1sq = float(r1 @ r1)
    az2 = abs(z2) ** 2
    cross = ((z1 * z2.conjugate() - z2 * z1.conjugate()) ** 2).real
    term1 = (
        -2 * r2n * abs(z1) ** 2 / az2
        + 2 * cross / (r2n * az2)
        + (r1sq * r2n**2 - dot**2) / (2 * r2n * az2)
        + 2 * r1sq / r2n
    )
    term2 = (
        2 * r2n * abs(z1) ** 2 / az2
        - 2 * cross / (r2n * az2)
        + r2n * cross / az2**2
        - 2 * dot**2 / r2n**3
    )
    return term1, term2


def o2o2_potential(m1: Multiplet, m2: Multiplet) -> float:
    """Hyperkahler potential K = -2 |r1 x r2|^2 / |r2|^3."""
    r1 = o2_to_vector(m1)
    r2 = o2_to_vector(m2)
    r2n = float(np.linalg.norm(r2))
    if r2n == 0:
        raise DomainError("K diverges for r2 = 0")
    return -2.0 * float(np.cross(r1, r2) @ np.cross(r1, r2)) / r2n**3


def o2o2_higgs(m1: Multiplet, m2: Multiplet) -> np.ndarray:
    """Higgs-field matrix Phi of the generalized Gibbons-Hawking form."""
    r1 = o2_to_vector(m1)
    r2 = o2_to_vector(m2)
    return _higgs_from_vectors(r1, r2)


def _higgs_from_vectors(r1, r2) -> np.ndarray:
    r2n = float(np.linalg.norm(r2))
    if r2n == 0:
        raise DomainError("Higgs matrix diverges for r2 = 0")
    dot = float(r1 @ r2)
    r1sq = float(r1 @ r1)
    return (2.0 / r2n) * np.array(
        [
            [-1.0, dot / r2n**2],
            [dot / r2n**2, (r1sq * r2n**2 - 3.0 * dot**2) / (2.0 * r2n**4)],
        ]
    )


def o2o2_higgs_gradients(m1: Multiplet, m2: Multiplet) -> np.ndarray:
    """grad[I, K, J, :] = d Phi_KJ / d r_I, in closed form."""
    r1 = o2_to_vector(m1)
    r2 = o2_to_vector(m2)
    r2n = float(np.linalg.norm(r2))
    dot = float(r1 @ r2)
    r1sq = float(r1 @ r1)
    n2 = r2 / r2n
    grad = np.zeros((2, 2, 2, 3))
    # Phi_11 = -2/r2
    grad[1, 0, 0] = 2.0 / r2n**2 * n2
    # Phi_12 = 2 dot / r2^3
    grad[0, 0, 1] = grad[0, 1, 0] = 2.0 * r2 / r2n**3
    grad[1, 0, 1] = grad[1, 1, 0] = 2.0 * r1 / r2n**3 - 6.0 * dot / r2n**4 * n2
    # Phi_22 = r1^2 / r2^3 - 3 dot^2 / r2^5
    grad[0, 1, 1] = 2.0 * r1 / r2n**3 - 6.0 * dot / r2n**5 * r2
    grad[1, 1, 1] = (
        -3.0 * r1sq / r2n**4 * n2
        - 6.0 * dot / r2n**5 * r1
        + 15.0 * dot**2 / r2n**6 * n2
    )
    return grad


# ---------------------------------------------------------------------------
# O(2) + O(4): auxiliaries
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class O2O4Aux:
    """Everything the closed-form F and its derivatives are built from."""

    z1: complex
    x1: float
    z2: complex
    v2: complex
    x2: float
    w: WeierstrassData
    dual: EllipticDual
    x_plus: float
    x_minus: float
    v_plus: float
    v_minus: float
    z1_plus: float
    z1_minus: float
    pi_plus: complex
    pi_minus: complex
    g_s2: float
    g_r2: float
    g_r3: float
    g_rs2: float
    g_r2s2: float


def o2o4_aux(m2: Multiplet, m4: Multiplet) -> O2O4Aux:
    z1, x1 = o2_coefficients(m2)
    z2, v2, x2 = o4_coefficients(m4)
    if abs(z2) == 0:
        raise DomainError("auxiliaries need z2 != 0; rotate the pair first")
    g_r2, g_r3 = o4_basic_invariants(m4)
    w = from_invariants(g_r2, g_r3)
    dual = dual_periods(w)
    sz = cmath.sqrt(z2)
    x_plus = (x2 + 6.0 * abs(z2)) / 3.0
    x_minus = (x2 - 6.0 * abs(z2)) / 3.0
    v = v2 / sz
    zr = z1 / sz
    pi_plus, pi_minus = infinity_point_pi(w, z2, v2, x2)
    grs, grrs = mixed_invariants(m2, m4)
    return O2O4Aux(
        z1, x1, z2, v2, x2, w, dual,
        x_plus, x_minus, v.imag, v.real, zr.imag, zr.real,
        pi_plus, pi_minus,
        g_sigma2(m2), g_r2, g_r3, grs, grrs,
    )


def o2o4_f(m2: Multiplet, m4: Multiplet, aux: O2O4Aux = None) -> float:
    """Closed-form F of the O(2)+O(4) model.

    F = 4 (z1+^2 - z1-^2) eta + 4 (x1^2 + x- z1+^2 - x+ z1-^2) omega
        + 2 Re[w] pi(x-) + 2i Im[w] pi(x+),  w = (z1/sqrt(z2))(v2 z1/z2 - 4 x1),

    with the infinity-point pi conventions of the elliptic module.  The
    result is real up to the half-lattice ambiguity of pi(x+), which a
    quadrature comparison resolves via one integer (see tests).
    """
    a = aux or o2o4_aux(m2, m4)
    coeff = (a.z1 / cmath.sqrt(a.z2)) * (a.v2 * a.z1 / a.z2 - 4.0 * a.x1)
    value = (
        4.0 * (a.z1_plus**2 - a.z1_minus**2) * a.w.eta
        + 4.0 * (a.x1**2 + a.x_minus * a.z1_plus**2 - a.x_plus * a.z1_minus**2) * a.w.omega
        + 2.0 * coeff.real * a.pi_minus
        + 2.0j * coeff.imag * a.pi_plus
    )
    if abs(value.imag) > 1e-8 * max(1.0, abs(value)):
        raise DomainError(f"closed-form F came out non-real: {value}")
    return value.real


def o2o4_gradients(m2: Multiplet, m4: Multiplet, aux: O2O4Aux = None):
    """(dF/dx1, dF/dv2, dF/dx2) in closed form.

    dF/dv2 uses the M/N coefficients; on the measure-zero set where their
    denominators (x+ - x-) v_pm vanish the caller should fall back to
    finite differences of o2o4_f.
    """
    a = aux or o2o4_aux(m2, m4)
    w, dual = a.w, a.dual
    df_dx1 = 8.0 * (
        a.x1 * w.omega - a.z1_minus * a.pi_minus - 1j * a.z1_plus * a.pi_plus
    )
    xpm_gap = a.x_plus - a.x_minus
    if abs(xpm_gap * a.v_plus) < 1e-12 or abs(xpm_gap * a.v_minus) < 1e-12:
        raise DomainError("M/N denominators vanish; use a finite-difference fallback")

    def m_pm(x_this, z1_this, v_this):
        num = (2.0 * a.g_r2 * x_this + 3.0 * a.g_r3) * (
            a.g_s2 - 3.0 * xpm_gap * z1_this**2
        ) - 3.0 * x_this**2 * a.g_rs2 - x_this * a.g_r2s2
        return num / (3.0 * xpm_gap * v_this)

    def n_pm(x_this, z1_this, v_this):
        num = (
            -(9.0 * a.g_r3 * x_this + 2.0 * a.g_r2**2)
            * (a.g_s2 - 3.0 * xpm_gap * z1_this**2)
            + (3.0 * a.g_r2 * x_this + 9.0 * a.g_r3) * a.g_rs2
            + (3.0 * x_this**2 - 2.0 * a.g_r2) * a.g_r2s2
        )
        return num / (3.0 * xpm_gap * v_this)

    m_minus = m_pm(a.x_minus, a.z1_minus, a.v_minus)
    m_plus = m_pm(a.x_plus, a.z1_plus, a.v_plus)
    n_minus = n_pm(a.x_minus, a.z1_minus, a.v_minus)
    n_plus = n_pm(a.x_plus, a.z1_plus, a.v_plus)
    m_coeff = m_minus + 1j * m_plus
    n_coeff = n_minus + 1j * n_plus
    df_dv2 = (
        2.0 * m_coeff * dual.eta_star
        + 2.0 * n_coeff * dual.omega_star
        + (a.z1_minus + 1j * a.z1_plus) ** 2 * (a.pi_minus + a.pi_plus)
    ) / cmath.sqrt(a.z2)
    df_dx2 = -2.0 * (a.g_rs2 * dual.eta_star - a.g_r2s2 * dual.omega_star)
    return df_dx1, df_dv2, df_dx2


def constraint_residual(m2: Multiplet, z2, v2, x2) -> float:
    """dF/dx2 = -2 (g_rs2 eta* - g_r2s2 omega*) for the trial x2."""
    m4 = o4_multiplet(z2, v2, x2)
    g_r2, g_r3 = o4_basic_invariants(m4)
    dual = dual_periods(from_invariants(g_r2, g_r3))
    grs, grrs = mixed_invariants(m2, m4)
    return -2.0 * (grs * dual.eta_star - grrs * dual.omega_star)


def _residual_scale(m2: Multiplet, z2, v2, x2) -> float:
    m4 = o4_multiplet(z2, v2, x2)
    g_r2, g_r3 = o4_basic_invariants(m4)
    dual = dual_periods(from_invariants(g_r2, g_r3))
    grs, grrs = mixed_invariants(m2, m4)
    return abs(grs * dual.eta_star) + abs(grrs * dual.omega_star) + 1e-300


def solve_constraint(m2: Multiplet, z2, v2, x2_guess, tol=1e-10, max_expand=40):
    """Solve dF/dx2 = 0 for the auxiliary coordinate x2.

    Brackets a sign change of the residual around the guess (geometric
    expansion), then runs safeguarded Newton with bisection fallback until
    |dF/dx2| < tol * (|g_rs2 eta*| + |g_r2s2 omega*|).
    """

    def f(x):
        return constraint_residual(m2, z2, v2, x)

    span = max(abs(x2_guess), 6.0 * abs(z2), 1e-3)
    lo = hi = float(x2_guess)
    flo = fhi = f(lo)
    scan = [(lo, flo)]
    step = 0.05 * span
    for _ in range(max_expand):
        lo_new, hi_new = lo - step, hi + step
        try:
            f_lo = f(lo_new)
            lo, flo = lo_new, f_lo
            scan.append((lo, flo))
        except Exception:
            pass
        try:
            f_hi = f(hi_new)
            hi, fhi = hi_new, f_hi
            scan.append((hi, fhi))
        except Exception:
            pass
        step *= 1.5
        scan.sort()
        for (xa, fa), (xb, fb) in zip(scan, scan[1:]):
            if fa == 0.0:
                return xa
            if fa * fb < 0:
                return _newton_bisect(f, xa, xb, fa, fb, m2, z2, v2, tol)
    raise NoSolutionError(
        "no sign change of dF/dx2 found in the scanned interval", scan=scan
    )


def _newton_bisect(f, lo, hi, flo, fhi, m2, z2, v2, tol):
    x = 0.5 * (lo + hi)
    for _ in range(120):
        fx = f(x)
        scale = _residual_scale(m2, z2, v2, x)
        if abs(fx) < tol * scale:
            return x
        if flo * fx < 0:
            hi, fhi = x, fx
        else:
            lo, flo = x, fx
        h = 1e-7 * max(1.0, abs(x))
        try:
            dfx = (f(x + h) - f(x - h)) / (2.0 * h)
        except Exception:
            dfx = 0.0
        if dfx != 0.0:
            x_new = x - fx / dfx
        else:
            x_new = 0.5 * (lo + hi)
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        x = x_new
    return x


def o2o4_potential(m2: Multiplet, m4: Multiplet) -> float:
    """Compact SO(3)-invariant hyperkahler potential (solved states).

    K = -(4/3)(g_r2s2 + 4 g_r2 g_s2) eta* + 4 (g_r2 g_rs2 + 6 g_r3 g_s2) omega*.
    """
    g_r2, g_r3 = o4_basic_invariants(m4)
    dual = dual_periods(from_invariants(g_r2, g_r3))
    gs = g_sigma2(m2)
    grs, grrs = mixed_invariants(m2, m4)
    return (
        -(4.0 / 3.0) * (grrs + 4.0 * g_r2 * gs) * dual.eta_star
        + 4.0 * (g_r2 * grs + 6.0 * g_r3 * gs) * dual.omega_star
    )


def o2o4_k_mixed(m2: Multiplet, m4: Multiplet, aux: O2O4Aux = None) -> float:
    """The Legendre-transform potential before imposing dF/dx2 = 0."""
    a = aux or o2o4_aux(m2, m4)
    return o2o4_potential(m2, m4) - 4.0 * (a.x_plus + a.x_minus) * (
        a.g_rs2 * a.dual.eta_star - a.g_r2s2 * a.dual.omega_star
    )


def o2o4_potential_assembly(m2: Multiplet, m4: Multiplet, aux: O2O4Aux = None) -> float:
    """K = F - u2 v2 - conj(u2 v2) - (u1 + conj(u1)) x1 with closed-form pieces."""
    a = aux or o2o4_aux(m2, m4)
    f_val = o2o4_f(m2, m4, aux=a)
    df_dx1, df_dv2, _ = o2o4_gradients(m2, m4, aux=a)
    value = f_val - 2.0 * (df_dv2 * a.v2).real - df_dx1.real * a.x1
    if abs(df_dx1.imag) > 1e-7 * max(1.0, abs(df_dx1)):
        raise DomainError("dF/dx1 came out non-real")
    return value


def unsolved_guard(m2: Multiplet, m4: Multiplet, tol=1e-6):
    """Raise unless the pair satisfies the Legendre constraint."""
    z2, v2, x2 = o4_coefficients(m4)
    res = constraint_residual(m2, z2, v2, x2)
    if abs(res) > tol * _residual_scale(m2, z2, v2, x2):
        raise UnsolvedStateError(f"constraint residual {res:.3e} too large")


def scaled_pair(m2: Multiplet, m4: Multiplet, lam: float):
    """The weight-(1, 2) scaling eta2 -> lam eta2, eta4 -> lam^2 eta4."""
    return m2.scaled(lam), m4.scaled(lam * lam)


# ---------------------------------------------------------------------------
# Darboux bookkeeping
# ---------------------------------------------------------------------------

def darboux_forward(u2: complex, z2: complex):
    """(u2, z2) -> (U2, Z2) = (u2 sqrt(z2), 2 sqrt(z2))."""
    sz = cmath.sqrt(z2)
    return u2 * sz, 2.0 * sz


def darboux_backward(u2_cap: complex, z2_cap: complex):
    """Inverse of darboux_forward."""
    sz = z2_cap / 2.0
    return u2_cap / sz, sz * sz


# ---------------------------------------------------------------------------
# asymptotic series and fit companions
# ---------------------------------------------------------------------------

def ba_from_curve(w: WeierstrassData) -> float:
    """B/A forced by the constraint, as a pure O(4) quantity."""
    dual = dual_periods(w)
    return -dual.eta_star / (dual.omega_star * math.sqrt(3.0 * w.g2))


def ba_series(regime: str, r2: float, r2p: float, nome: float, order: int = 2) -> float:
    """The constraint's B/A series in the chosen asymptotic regime."""
    if order > 2 or order < 0:
        raise DomainError("series known to two correction orders")
    if regime == "q":
        coeffs = [7.0 / 5.0, -504.0 / 5.0, 101808.0 / 5.0]
    elif regime == "qprime":
        coeffs = [
            1.0,
            -288.0 * (3.0 * r2 - r2p) / r2,
            6912.0 * (39.0 * r2**2 - 26.0 * r2 * r2p + 5.0 * r2p**2) / r2**2,
        ]
    else:
        raise DomainError("regime must be 'q' or 'qprime'")
    return sum(c * nome ** (2 * n) for n, c in enumerate(coeffs[: order + 1]))


def k_series(regime: str, r1: float, r2: float, r2p: float, a_ang: float,
              nome: float, order: int = 2) -> float:
    """The hyperkahler-potential series in the chosen asymptotic regime."""
    if order > 2 or order < 0:
        raise DomainError("series known to two correction orders")
    if regime == "q":
        base = (2.0 / 5.0) * (a_ang - 10.0 / 3.0) * r1**2 / r2
        corr = [
            a_ang * r1**2 / r2 * (216.0 / 5.0),
            -a_ang * r1**2 / r2 * (14832.0 / 5.0),
        ]
    elif regime == "qprime":
        base = 2.0 * (a_ang - 2.0 / 3.0) * r1**2 / r2 - 6.0 * a_ang * r1**2 / r2p
        corr = [
            a_ang * r1**2 / r2p * 144.0 * (5.0 * r2**2 - 7.0 * r2 * r2p + 2.0 * r2p**2) / r2**2,
            -a_ang * r1**2 / r2p * 432.0
            * (285.0 * r2**3 - 678.0 * r2**2 * r2p + 416.0 * r2 * r2p**2 - 80.0 * r2p**3)
            / r2**3,
        ]
    else:
        raise DomainError("regime must be 'q' or 'qprime'")
    return base + sum(c * nome ** (2 * (n + 1)) for n, c in enumerate(corr[:order]))


def fit_exponential_coefficients(nomes, values, basis):
    """Solve the Vandermonde system values = sum_j c_j basis_j(nome)."""
    a = np.array([[b(x) for b in basis] for x in nomes], dtype=float)
    y = np.array(values, dtype=float)
    coef, *_ = np.linalg.lstsq(a, y, rcond=None)
    return coef


def degenerate_limit_report(m2: Multiplet, m4_solved: Multiplet):
    """Compare the near-pinch O(2)+O(4) potential with the O(2)+O(2) one.

    The O(4) is assumed close to the square of an O(2) (alpha near beta);
    the matching O(2)+O(2) configuration carries r2_vec = r2 * n(alpha).
    """
    from .multiplet import coefficients_to_roots, unit_vector

    g_r2, g_r3 = o4_basic_invariants(m4_solved)
    w = from_invariants(g_r2, g_r3)
    c4 = coefficients_to_roots(m4_solved)
    n_dir = unit_vector(c4.roots[0])
    r1_vec = o2_to_vector(m2)
    r2_vec = w.r2 * n_dir
    m2b = vector_to_o2(r2_vec)
    k_o2o2 = o2o2_potential(m2, m2b)
    from .invariants import angular_invariants

    a_ang, b_ang = angular_invariants(m2, m4_solved)
    r1 = math.sqrt(g_sigma2(m2))
    k0 = 2.0 * (a_ang - 2.0 / 3.0) * r1**2 / w.r2
    return {
        "k0_from_invariants": k0,
        "k_o2o2": k_o2o2,
        "a_angular": a_ang,
        "b_angular": b_ang,
        "q_prime": w.q_prime,
        "k_full": o2o4_potential(m2, m4_solved),
    }
