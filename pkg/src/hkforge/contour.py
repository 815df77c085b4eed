"""Numerical contour integration on the twistor sphere.

Every contour is a union of oriented circles.  Integrands of scaling
weight -1 (the O(2) invariant integral, the mixed Gamma_0/+/- family, the
period integrands 1/sqrt(eta4)) define rotation-invariant loop integrals,
so each loop is evaluated in its own chart: the enclosed points are
rotated to the origin first, which makes circle construction robust for
any configuration.  Chart-dependent integrands (the I1/I2 family and the
F-function of the O(2)+O(4) model) are integrated in the chart the data
arrives in, without rotation.

Quadrature is the periodic trapezoid rule, spectrally accurate on closed
analytic curves; node counts double until two successive refinements
agree.  Square roots of the quartic are tracked continuously along the
curve and must close up, else the contour clipped a branch point.

Conventions frozen against the closed forms:

* rational invariant integrals are dumbbells, a (+) loop around a root
  set with a (-) loop around the antipodal mirror set, times 1/(2 pi i);
* period integrals are half the raw branch-tracked loop value, the
  leftover sign fixed by I_a > 0 and I_b/i > 0;
* the I^(1)_m / F family carries no prefactor: the raw branch-tracked
  loop integral with the overall branch chosen so that Re I0 > 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContourError, DomainError, NearDegenerateError
from .multiplet import (
    Multiplet,
    RootConstellation,
    SU2Element,
    antipode,
    chordal_kprime,
    coefficients_to_roots,
    is_inf,
    mobius_apply,
    mobius_point,
    unit_vector,
    wigner_rotate,
)

__all__ = [
    "Contour",
    "build_contour",
    "i1_family",
    "integrate_o2_invariant",
    "mixed_integrals",
    "o2o2_f_quadrature",
    "o4_periods",
    "uh_contour_values",
]

DEFAULT_NODES = 4096
MAX_NODES = 1 << 18
CONV_TOL = 1e-10
CONTOUR_KINDS = ("gamma", "gamma_a", "gamma_b", "gamma_0", "gamma_plus", "gamma_minus")


@dataclass(frozen=True)
class Loop:
    """One oriented circle living in its own rotated chart."""

    center: complex
    radius: float
    orientation: int
    rotation: SU2Element


@dataclass(frozen=True)
class Contour:
    kind: str
    loops: tuple
    samples: int


def _rotation_sending_to_north(d) -> SU2Element:
    """Rotation taking the unit direction d to the north pole (zeta = 0)."""
    target = np.array([0.0, 0.0, 1.0])
    axis = np.cross(d, target)
    s = float(np.linalg.norm(axis))
    c = float(d @ target)
    if s < 1e-12:
        if c > 0:
            return SU2Element.identity()
        return SU2Element(0.0, 1.0)
    axis = axis / s
    half = 0.5 * math.atan2(s, c)
    a = complex(math.cos(half), axis[2] * math.sin(half))
    b = complex(axis[1], -axis[0]) * math.sin(half)
    return SU2Element(a, b)


def _make_loop(inside, outside, orientation, clearance_factor, rotate=True):
    """Circle separating `inside` from `outside` on the sphere.

    With rotate=True, the best separating cap direction (sum of enclosed
    unit vectors minus sum of excluded ones) is rotated to the north pole
    and the loop is an origin-centered circle in that chart.
    """
    if rotate:
        d = np.sum([unit_vector(p) for p in inside], axis=0)
        if outside:
            d = d - np.sum([unit_vector(p) for p in outside], axis=0)
        n = np.linalg.norm(d)
        if n < 1e-12:
            raise NearDegenerateError(
                "enclosed and excluded roots coincide on the sphere",
                pair=(inside, outside),
            )
        rot = _rotation_sending_to_north(d / n)
    else:
        rot = SU2Element.identity()
    pin = [mobius_point(rot, p) for p in inside]
    pout = [mobius_point(rot, p) for p in outside]
    if any(is_inf(p) for p in pin):
        raise ContourError("enclosed root at infinity; rotate the data first")
    if rotate:
        center = 0j
    else:
        center = sum(complex(p) for p in pin) / len(pin)
    r_in = max(abs(complex(p) - center) for p in pin)
    r_out = min(
        (abs(complex(p) - center) for p in pout if not is_inf(p)),
        default=r_in + 2.0,
    )
    if r_in >= r_out * (1.0 - clearance_factor):
        raise NearDegenerateError(
            f"cannot thread a circle between roots (needed {r_in:.3g}, allowed {r_out:.3g})",
            pair=(inside, outside),
        )
    radius = 0.5 * (r_in + r_out) if outside else r_in + 1.0
    return Loop(center, radius, orientation, rot)


def _loop_points(loop, samples):
    theta = 2.0 * math.pi * np.arange(samples) / samples
    z = loop.center + loop.radius * np.exp(1j * theta)
    dz = 1j * (z - loop.center) * (2.0 * math.pi / samples)
    return z, dz


def _eta_vals(m: Multiplet, z):
    poly = m.polynomial()
    return np.polyval(poly[::-1], z) / z ** int(round(m.j))


def _loop_integral(loop, integrand, samples, tol=CONV_TOL):
    """Adaptive closed-loop trapezoid of a single-valued integrand."""

    def once(n):
        z, dz = _loop_points(loop, n)
        return loop.orientation * complex(np.sum(integrand(z) * dz))

    prev = once(samples)
    n = samples
    while n < MAX_NODES:
        n *= 2
        cur = once(n)
        if abs(cur - prev) <= tol * max(1.0, abs(cur)):
            return cur
        prev = cur
    return prev


def _branch_sqrt(values):
    w = np.sqrt(values.astype(complex))
    out = np.empty_like(w)
    out[0] = w[0]
    for k in range(1, len(w)):
        out[k] = w[k] if abs(w[k] - out[k - 1]) <= abs(w[k] + out[k - 1]) else -w[k]
    if abs(out[-1] - out[0]) > abs(out[-1] + out[0]):
        raise ContourError("square-root branch does not close along the contour")
    return out


def _loop_integral_sqrt(loop, numerators, quartic, samples, tol=CONV_TOL):
    """Adaptive loop integrals of numerators[i](z)/sqrt(quartic(z)), shared branch."""

    def once(n):
        z, dz = _loop_points(loop, n)
        sq = _branch_sqrt(quartic(z))
        return [loop.orientation * complex(np.sum(num(z) / sq * dz)) for num in numerators]

    prev = once(samples)
    n = samples
    while n < MAX_NODES:
        n *= 2
        cur = once(n)
        if all(
            abs(c - p) <= tol * max(1.0, abs(c)) for c, p in zip(cur, prev)
        ):
            return cur
        prev = cur
    return prev


# ---------------------------------------------------------------------------
# contour construction
# ---------------------------------------------------------------------------

def build_contour(kind, c2: RootConstellation = None, c4: RootConstellation = None,
                  samples=DEFAULT_NODES, clearance_factor=0.1, rotate=True):
    """Oriented circle system for one of the six figure contours.

    gamma        dumbbell: (+) around the O(2) root, (-) around its antipode
    gamma_a      one branch-tracked circle around {alpha, antipode(beta)}
    gamma_b      one branch-tracked circle around {alpha, beta}
    gamma_0      dumbbell around the alpha-pair vs the beta-pair
    gamma_plus   dumbbell around {alpha, beta} vs the antipodal mirror pair
    gamma_minus  dumbbell around {alpha, antipode(beta)} vs the mirror

    With rotate=True each loop lives in its own chart (enclosed points
    rotated to the origin), which is legitimate for weight -1 integrands;
    rotate=False keeps the chart of the input data.
    """
    if kind not in CONTOUR_KINDS:
        raise DomainError(f"unknown contour kind {kind!r}")
    cf = clearance_factor
    if kind == "gamma":
        if c2 is None:
            raise DomainError("gamma needs an O(2) constellation")
        g = c2.roots[0]
        ag = antipode(g)
        loops = (
            _make_loop([g], [ag], +1, cf, rotate),
            _make_loop([ag], [g], -1, cf, rotate),
        )
        return Contour(kind, loops, samples)

    if c4 is None:
        raise DomainError(f"{kind} needs an O(4) constellation")
    a, b = c4.roots
    aa, ab = antipode(a), antipode(b)

    if kind == "gamma_a":
        try:
            loops = (_make_loop([a, ab], [b, aa], +1, cf, rotate),)
        except NearDegenerateError:
            loops = (_make_loop([b, aa], [a, ab], +1, cf, rotate),)
        return Contour(kind, loops, samples)
    if kind == "gamma_b":
        try:
            loops = (_make_loop([a, b], [aa, ab], +1, cf, rotate),)
        except NearDegenerateError:
            loops = (_make_loop([aa, ab], [a, b], +1, cf, rotate),)
        return Contour(kind, loops, samples)
    if kind == "gamma_0":
        # no single circle separates one antipodal pair from another, so the
        # alpha-pair dumbbell is realized by four one-root loops
        loops = (
            _make_loop([a], [b, aa, ab], +1, cf, rotate),
            _make_loop([aa], [a, b, ab], +1, cf, rotate),
            _make_loop([b], [a, aa, ab], -1, cf, rotate),
            _make_loop([ab], [a, b, aa], -1, cf, rotate),
        )
    elif kind == "gamma_plus":
        loops = (
            _make_loop([a, b], [aa, ab], +1, cf, rotate),
            _make_loop([aa, ab], [a, b], -1, cf, rotate),
        )
    else:  # gamma_minus
        loops = (
            _make_loop([a, ab], [b, aa], +1, cf, rotate),
            _make_loop([b, aa], [a, ab], -1, cf, rotate),
        )
    return Contour(kind, loops, samples)


def verify_windings(contour: Contour, c4: RootConstellation = None, c2: RootConstellation = None,
                    samples=DEFAULT_NODES):
    """Winding numbers of each loop around every root, via the argument principle."""
    roots = []
    if c4 is not None:
        roots += c4.all_roots()
    if c2 is not None:
        roots += c2.all_roots()
    table = []
    for loop in contour.loops:
        row = []
        for r in roots:
            rr = mobius_point(loop.rotation, r)
            if is_inf(rr):
                row.append(0)
                continue

            def f(z, rr=rr):
                return 1.0 / (z - rr)

            w = _loop_integral(loop, f, samples) / (2j * math.pi)
            row.append(int(round(w.real)))
        table.append(tuple(row))
    return table


# ---------------------------------------------------------------------------
# the paper's integrals
# ---------------------------------------------------------------------------

def _dumbbell_value(contour, m_list, make_integrand, samples):
    """Sum of per-loop integrals of a weight -1 integrand, over 2 pi i."""
    total = 0j
    for loop in contour.loops:
        rotated = [wigner_rotate(loop.rotation, m) for m in m_list]
        f = make_integrand(*rotated)
        total += _loop_integral(loop, f, samples)
    return total / (2j * math.pi)


def integrate_o2_invariant(m2: Multiplet, samples=DEFAULT_NODES) -> float:
    """Fig.-1 invariant integral of dzeta/zeta / eta2; equals 2/sigma."""
    c2 = coefficients_to_roots(m2)
    contour = build_contour("gamma", c2=c2, samples=samples)
    value = _dumbbell_value(
        contour, [m2], lambda m: (lambda z: 1.0 / (z * _eta_vals(m, z))), samples
    )
    if abs(value.imag) > 1e-8 * max(1.0, abs(value.real)):
        raise ContourError(f"O(2) invariant integral came out non-real: {value}")
    return value.real


def o4_periods(m4: Multiplet, samples=DEFAULT_NODES):
    """(I_a, I_b) = (2K/sqrt(rho), 2iK'/sqrt(rho)) by branch-tracked quadrature.

    The two homology classes are integrated separately; which is which is
    decided by reality (I_a real, I_b imaginary), then signs are fixed
    positive, matching r2, r2' > 0.
    """
    c4 = coefficients_to_roots(m4)
    vals = []
    for kind in ("gamma_a", "gamma_b"):
        contour = build_contour(kind, c4=c4, samples=samples)
        loop = contour.loops[0]
        m4r = wigner_rotate(loop.rotation, m4)
        raw = _loop_integral_sqrt(
            loop, [lambda z: 1.0 / z], lambda z: _eta_vals(m4r, z), samples
        )[0]
        vals.append(raw / 2.0)
    scale = max(abs(v) for v in vals)
    real_vals = [v for v in vals if abs(v.imag) <= 1e-7 * scale]
    imag_vals = [v for v in vals if abs(v.real) <= 1e-7 * scale]
    if len(real_vals) != 1 or len(imag_vals) != 1:
        raise ContourError(f"period integrals have inconsistent reality: {vals}")
    ia, ib = real_vals[0], imag_vals[0]
    return complex(abs(ia.real)), complex(0.0, abs(ib.imag))


def mixed_integrals(m2: Multiplet, m4: Multiplet, samples=DEFAULT_NODES):
    """(I(Gamma_0), I(Gamma_+), I(Gamma_-)) of dzeta/zeta eta2/eta4.

    The squares match (sigma/rho)^2 Q0^2/(k^2 k'^2)^2, (sigma/rho)^2
    Q+^2/k^4 and (sigma/rho)^2 Q-^2/k'^4; the signs depend on contour
    orientations the figures leave free.
    """
    c2 = coefficients_to_roots(m2)
    c4 = coefficients_to_roots(m4)
    out = []
    for kind in ("gamma_0", "gamma_plus", "gamma_minus"):
        contour = build_contour(kind, c2=c2, c4=c4, samples=samples)
        value = _dumbbell_value(
            contour,
            [m2, m4],
            lambda a2, a4: (lambda z: _eta_vals(a2, z) / (z * _eta_vals(a4, z))),
            samples,
        )
        out.append(value)
    return tuple(out)


def o2o2_f_quadrature(m2a: Multiplet, m2b: Multiplet, samples=DEFAULT_NODES) -> float:
    """(1/2 pi i) over the eta_b dumbbell of dzeta/zeta eta_a^2/eta_b.

    The integrand has scaling weight +1, so it is chart-dependent: the
    loops stay in the chart the data arrives in, and the pole at the
    origin (eta_a^2 brings one) stays outside.  The dumbbell orientation
    that reproduces the residue evaluation is sign(sigma_b) times
    (+ around the stored root, - around its antipode).
    """
    cb = coefficients_to_roots(m2b)
    g = cb.roots[0]
    ag = antipode(g)

    def f(z):
        return _eta_vals(m2a, z) ** 2 / (z * _eta_vals(m2b, z))

    value = 0j
    for inside, outside, orient in (([g], [ag, 0j], +1), ([ag], [g, 0j], -1)):
        loop = _make_loop(inside, outside, orient, 0.05, rotate=False)
        value += _loop_integral(loop, f, samples)
    value *= math.copysign(1.0, cb.scale) / (2j * math.pi)
    if abs(value.imag) > 1e-7 * max(1.0, abs(value.real)):
        raise ContourError(f"O(2)+O(2) F integral came out non-real: {value}")
    return value.real


def uh_contour_values(m2, m4: Multiplet, samples=DEFAULT_NODES):
    """Separating-contour integrals of the O(2)+O(4) model in one pass.

    Returns {"i0", "i1", "i2"[, "f", "df_dx2"]}: the I^(1)_m family, the
    F-function and dF/dx2, sharing one branch-tracked square root whose
    global sign is fixed by Re I0 > 0.  These integrands are
    chart-dependent (except i0 and df_dx2), so the data is used exactly as
    handed in; configurations crowding infinity must be rotated by the
    caller beforehand.
    """
    c4 = coefficients_to_roots(m4)

    def quartic(z):
        return _eta_vals(m4, z)

    # the labeling of representatives does not decide the homology class:
    # probe both two-point loops and keep the one with the real period
    loop = None
    for kind in ("gamma_a", "gamma_b"):
        cand = build_contour(kind, c4=c4, samples=samples, rotate=False).loops[0]
        probe = _loop_integral_sqrt(cand, [lambda z: 0.5 / z], quartic, samples)[0]
        if abs(probe.imag) <= 1e-7 * abs(probe):
            loop = cand
            break
    if loop is None:
        raise ContourError("no real-period two-point loop found in this chart")

    names = ["i0", "i1", "i2"]
    numerators = [
        lambda z: 0.5 / z,
        lambda z: 0.5 * np.ones_like(z),
        lambda z: 0.5 * z,
    ]
    if m2 is not None:
        names += ["f", "df_dx2"]
        numerators += [
            lambda z: _eta_vals(m2, z) ** 2 / z,
            lambda z: -0.5 * _eta_vals(m2, z) ** 2 / (z * quartic(z)),
        ]
    vals = _loop_integral_sqrt(loop, numerators, quartic, samples)
    results = dict(zip(names, vals))
    if results["i0"].real < 0:
        results = {k: -v for k, v in results.items()}
    return results


def i1_family(m4: Multiplet, samples=DEFAULT_NODES):
    """The purely-O(4) integrals (I0, I1, I2) over the separating contour."""
    vals = uh_contour_values(None, m4, samples=samples)
    return vals["i0"], vals["i1"], vals["i2"]
