"""O(2j) multiplets on the twistor sphere.

A real multiplet is held either in coefficient form (the 2j+1 spherical
components psi_m, m = -j..j) or in Majorana form (a real scale plus j
antipodal pairs of Riemann-sphere roots, one representative stored per
pair).  The two forms are related by

    P(zeta) = zeta^j eta(zeta)
            = sum_m binom(2j, j+m)^(1/2) conj(psi_m) zeta^(j+m)
            = scale * prod_l (zeta - a_l)(conj(a_l) zeta + 1) / (1 + |a_l|^2)

and the reality condition reads psi_{-m} = (-1)^m conj(psi_m).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RealityError, StructuralError

__all__ = [
    "INF",
    "Multiplet",
    "RootConstellation",
    "SU2Element",
    "antipode",
    "chordal_k",
    "chordal_kprime",
    "coefficients_to_roots",
    "is_inf",
    "mobius_apply",
    "mobius_point",
    "o2_coefficients",
    "o2_multiplet",
    "o2_to_vector",
    "o4_coefficients",
    "o4_multiplet",
    "vector_to_o2",
    "random_real_multiplet",
    "random_su2",
    "roots_to_coefficients",
    "unit_vector",
    "validate_reality",
    "wigner_d_matrix",
    "wigner_rotate",
]

DEFAULT_TOL = 1e-9


class _Infinity:
    """Sentinel for the point at infinity on the Riemann sphere."""

    __slots__ = ()

    def __repr__(self):
        return "INF"


INF = _Infinity()


def is_inf(point) -> bool:
    return isinstance(point, _Infinity)


def _two_j(j) -> int:
    two_j = int(round(2 * j))
    if two_j < 1 or abs(2 * j - two_j) > 1e-12:
        raise StructuralError(f"spin must be a positive half-integer, got {j}")
    return two_j


@dataclass(frozen=True)
class Multiplet:
    """O(2j) section in coefficient form: psi_m for m = -j..j ascending."""

    j: float
    coeffs: tuple

    def __post_init__(self):
        two_j = _two_j(self.j)
        coeffs = tuple(complex(c) for c in self.coeffs)
        if len(coeffs) != two_j + 1:
            raise StructuralError(
                f"O({two_j}) multiplet needs {two_j + 1} coefficients, got {len(coeffs)}"
            )
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "j", two_j / 2.0)

    @property
    def two_j(self) -> int:
        return int(round(2 * self.j))

    def psi(self, m) -> complex:
        """Coefficient psi_m, m counted from -j to j."""
        idx = int(round(m + self.j))
        if not 0 <= idx <= self.two_j:
            raise DomainError(f"m={m} out of range for j={self.j}")
        return self.coeffs[idx]

    def polynomial(self) -> np.ndarray:
        """Coefficients of P(zeta) = zeta^j eta(zeta), ascending powers."""
        two_j = self.two_j
        return np.array(
            [
                math.sqrt(math.comb(two_j, i)) * complex(self.coeffs[i]).conjugate()
                for i in range(two_j + 1)
            ]
        )

    def eta(self, zeta) -> complex:
        """Evaluate the tropical form eta(zeta); zeta may be INF only for j integer sections that stay finite there, so INF is rejected."""
        if is_inf(zeta):
            raise DomainError("eta(INF) diverges for generic sections")
        zeta = complex(zeta)
        poly = self.polynomial()
        p = complex(np.polyval(poly[::-1], zeta))
        return p / zeta ** self.j if zeta != 0 else _eta_at_origin(poly, self.j)

    def scaled(self, factor) -> "Multiplet":
        return Multiplet(self.j, tuple(factor * c for c in self.coeffs))

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))


def _eta_at_origin(poly, j):
    two_j = int(round(2 * j))
    low = poly[: int(round(j))]
    if np.max(np.abs(low), initial=0.0) > 1e-13 * np.max(np.abs(poly)):
        raise DomainError("eta(0) diverges: section has a pole at the origin")
    return complex(poly[int(round(j))]) if two_j % 2 == 0 else 0j


def o2_multiplet(z1, x1) -> Multiplet:
    """O(2) section eta = conj(z1)/zeta + x1 - z1*zeta."""
    z1 = complex(z1)
    return Multiplet(1.0, (z1, complex(x1) / math.sqrt(2), -z1.conjugate()))


def o4_multiplet(z2, v2, x2) -> Multiplet:
    """O(4) section eta = conj(z2)/zeta^2 + conj(v2)/zeta + x2 - v2*zeta + z2*zeta^2."""
    z2, v2 = complex(z2), complex(v2)
    return Multiplet(
        2.0,
        (z2, v2 / 2, complex(x2) / math.sqrt(6), -v2.conjugate() / 2, z2.conjugate()),
    )


def o2_coefficients(m: Multiplet):
    """(z1, x1) of an O(2) multiplet."""
    if m.two_j != 2:
        raise DomainError("expected an O(2) multiplet")
    return m.coeffs[0], math.sqrt(2) * m.coeffs[1].real


def o4_coefficients(m: Multiplet):
    """(z2, v2, x2) of an O(4) multiplet."""
    if m.two_j != 4:
        raise DomainError("expected an O(4) multiplet")
    return m.coeffs[0], 2 * m.coeffs[1], math.sqrt(6) * m.coeffs[2].real


def validate_reality(m: Multiplet, tol: float = DEFAULT_TOL) -> bool:
    """True iff psi_{-m} = (-1)^m conj(psi_m) for every m, within tol (relative).

    Only integer-j sections admit nonzero real representatives (the antipodal
    map is fixed-point free), so half-integer spins are rejected outright.
    """
    if m.two_j % 2 != 0:
        raise DomainError("reality condition applies to integer-j sections only")
    coeffs = np.asarray(m.coeffs)
    scale = float(np.max(np.abs(coeffs), initial=0.0))
    if scale == 0.0:
        return True
    half = m.two_j // 2
    for i in range(m.two_j + 1):
        mval = i - half
        expected = (-1) ** mval * coeffs[m.two_j - i].conjugate()
        if abs(coeffs[i] - expected) > tol * scale:
            return False
    return True


def antipode(point):
    """Antipodal map zeta -> -1/conj(zeta); exchanges 0 and INF."""
    if is_inf(point):
        return 0j
    point = complex(point)
    if point == 0:
        return INF
    return -1.0 / point.conjugate()


def _spinor(point):
    """Normalized homogeneous representative (u1, u2) with zeta = u2/u1."""
    if is_inf(point):
        return 0j, 1 + 0j
    point = complex(point)
    n = math.sqrt(1.0 + abs(point) ** 2)
    if not math.isfinite(n):
        return 0j, 1 + 0j
    return 1.0 / n + 0j, point / n


def chordal_k(p, q) -> float:
    """Chordal radius k = |1 + conj(p) q| / sqrt((1+|p|^2)(1+|q|^2))."""
    (u1, u2), (v1, v2) = _spinor(p), _spinor(q)
    return abs(u1.conjugate() * v1 + u2.conjugate() * v2)


def chordal_kprime(p, q) -> float:
    """Complementary chordal radius k' = |p - q| / sqrt((1+|p|^2)(1+|q|^2))."""
    (u1, u2), (v1, v2) = _spinor(p), _spinor(q)
    return abs(u1 * v2 - u2 * v1)


def unit_vector(point) -> np.ndarray:
    """Inverse stereographic image of a sphere point as a unit 3-vector."""
    if is_inf(point):
        return np.array([0.0, 0.0, -1.0])
    z = complex(point)
    d = 1.0 + abs(z) ** 2
    return np.array([2 * z.real / d, 2 * z.imag / d, (1.0 - abs(z) ** 2) / d])


@dataclass(frozen=True)
class RootConstellation:
    """Scale plus one representative root per antipodal pair (INF allowed)."""

    j: float
    scale: float
    roots: tuple

    def __post_init__(self):
        two_j = _two_j(self.j)
        if two_j % 2 != 0:
            raise StructuralError("root constellations require integer j (O(2), O(4), ...)")
        roots = tuple(r if is_inf(r) else complex(r) for r in self.roots)
        if len(roots) != two_j // 2:
            raise StructuralError(
                f"O({two_j}) constellation needs {two_j // 2} root pairs, got {len(roots)}"
            )
        if not math.isfinite(self.scale):
            raise StructuralError("scale must be real and finite")
        object.__setattr__(self, "roots", roots)
        object.__setattr__(self, "scale", float(self.scale))
        object.__setattr__(self, "j", two_j / 2.0)

    @property
    def two_j(self) -> int:
        return int(round(2 * self.j))

    def all_roots(self) -> list:
        """Full root multiset: every representative together with its antipode."""
        out = []
        for r in self.roots:
            out.append(r)
            out.append(antipode(r))
        return out


def _pair_factor(root) -> np.ndarray:
    """Polynomial factor (ascending) contributed by one antipodal pair."""
    if is_inf(root):
        return np.array([0j, -1 + 0j])
    a = complex(root)
    return np.array([-a, 1 - abs(a) ** 2 + 0j, a.conjugate()]) / (1.0 + abs(a) ** 2)


def roots_to_coefficients(c: RootConstellation) -> Multiplet:
    """Expand the Majorana product form into coefficient form."""
    two_j = c.two_j
    poly = np.array([c.scale + 0j])
    for r in c.roots:
        poly = np.convolve(poly, _pair_factor(r))
    full = np.zeros(two_j + 1, dtype=complex)
    full[: len(poly)] = poly
    coeffs = [
        (full[i] / math.sqrt(math.comb(two_j, i))).conjugate() for i in range(two_j + 1)
    ]
    return Multiplet(c.j, tuple(coeffs))


def _newton_polish(poly_desc, roots, steps=2):
    """A couple of Newton steps on each companion-matrix eigenvalue."""
    deriv = np.polyder(poly_desc)
    out = []
    for r in roots:
        for _ in range(steps):
            dp = np.polyval(deriv, r)
            if dp == 0:
                break
            r = r - np.polyval(poly_desc, r) / dp
        out.append(r)
    return out


def _quadratic_roots(c0, c1, c2):
    """Stable closed-form roots of c2 z^2 + c1 z + c0 (c2 != 0)."""
    disc = cmath.sqrt(c1 * c1 - 4 * c2 * c0)
    if abs(c1 + disc) < abs(c1 - disc):
        disc = -disc
    q = -0.5 * (c1 + disc)
    r1 = q / c2
    r2 = c0 / q if q != 0 else 0j
    return [r1, r2]


def coefficients_to_roots(m: Multiplet, tol: float = DEFAULT_TOL) -> RootConstellation:
    """Invert roots_to_coefficients: solve for the root constellation.

    The finite roots come from the companion matrix (closed form for j=1)
    polished by Newton; degree deficits at the top/bottom of the polynomial
    are roots at INF/0.  Antipodal partners are then matched greedily in the
    chordal metric and one canonical representative (|a| <= 1, ties broken by
    smaller argument) is kept per pair.
    """
    if m.two_j % 2 != 0:
        raise DomainError("root extraction implemented for integer j only")
    if not validate_reality(m, tol=max(tol, DEFAULT_TOL)):
        raise RealityError("multiplet violates the antipodal reality condition")
    poly = m.polynomial()
    scale0 = float(np.max(np.abs(poly)))
    if scale0 == 0.0:
        raise DomainError("zero multiplet has no root constellation")
    strip = 1e-12 * scale0
    two_j = m.two_j

    lo = 0
    while lo <= two_j and abs(poly[lo]) <= strip:
        lo += 1
    hi = two_j
    while hi >= 0 and abs(poly[hi]) <= strip:
        hi -= 1
    if lo != two_j - hi:
        raise RealityError("root multiplicities at 0 and INF do not pair up")

    inner = poly[lo : hi + 1]
    if len(inner) - 1 >= 1:
        if len(inner) == 3:
            finite = _quadratic_roots(inner[0], inner[1], inner[2])
        else:
            finite = list(np.roots(inner[::-1]))
        finite = _newton_polish(inner[::-1], finite)
    else:
        finite = []

    roots = [0j] * lo + finite + [INF] * lo
    reps = _pair_antipodally(roots, tol)
    trial = RootConstellation(m.j, 1.0, tuple(reps))
    recon = roots_to_coefficients(trial).polynomial()
    k = int(np.argmax(np.abs(recon)))
    scale = poly[k] / recon[k]
    if abs(scale.imag) > 1e-7 * abs(scale):
        raise RealityError(f"reconstructed scale is not real: {scale}")
    return RootConstellation(m.j, scale.real, tuple(reps))


def _chordal_gap(p, q) -> float:
    return chordal_kprime(p, q)


def _pair_antipodally(roots, tol):
    """Greedy nearest-match pairing of a root multiset into antipodal pairs."""
    pool = list(roots)
    reps = []
    while pool:
        best = None
        for i in range(len(pool)):
            target = antipode(pool[i])
            for k in range(len(pool)):
                if k == i:
                    continue
                gap = _chordal_gap(target, pool[k])
                if best is None or gap < best[0]:
                    best = (gap, i, k)
        gap, i, k = best
        if gap > max(1e-8, tol * 10):
            raise RealityError(
                f"cannot pair root {pool[i]!r} with an antipodal partner (gap {gap:.3e})"
            )
        a, b = pool[i], pool[k]
        for idx in sorted((i, k), reverse=True):
            pool.pop(idx)
        reps.append(_choose_representative(a, b))
    return reps


def _choose_representative(a, b):
    """Pick the member with |root| <= 1; break ties by smaller arg in [0, 2pi)."""

    def key(p):
        if is_inf(p):
            return (math.inf, 0.0)
        return (abs(p), cmath.phase(p) % (2 * math.pi))

    ka, kb = key(a), key(b)
    if abs(ka[0] - kb[0]) < 1e-12 * max(1.0, ka[0] if ka[0] != math.inf else 1.0):
        return a if ka[1] <= kb[1] else b
    return a if ka < kb else b


@dataclass(frozen=True)
class SU2Element:
    """Cayley-Klein parameters (a, b) with |a|^2 + |b|^2 = 1."""

    a: complex
    b: complex

    def __post_init__(self):
        a, b = complex(self.a), complex(self.b)
        n = abs(a) ** 2 + abs(b) ** 2
        if abs(n - 1.0) > 1e-9:
            raise StructuralError(f"|a|^2+|b|^2 = {n} is not 1")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def identity(cls):
        return cls(1.0, 0.0)

    @classmethod
    def from_euler(cls, phi, theta, psi):
        a = math.cos(theta / 2) * cmath.exp(0.5j * (phi + psi))
        b = math.sin(theta / 2) * cmath.exp(0.5j * (phi - psi))
        return cls(a, b)

    def compose(self, other: "SU2Element") -> "SU2Element":
        """self after other (matrix product of the defining 2x2 matrices)."""
        a = self.a * other.a - self.b * other.b.conjugate()
        b = self.a * other.b + self.b * other.a.conjugate()
        return SU2Element(a, b)

    def inverse(self) -> "SU2Element":
        return SU2Element(self.a.conjugate(), -self.b)


def random_su2(rng) -> SU2Element:
    """Haar-uniform SU(2) element."""
    g = rng.standard_normal(4)
    g /= np.linalg.norm(g)
    return SU2Element(complex(g[0], g[1]), complex(g[2], g[3]))


def mobius_point(r: SU2Element, point):
    """Mobius action zeta -> (a zeta + b)/(-conj(b) zeta + conj(a))."""
    if is_inf(point):
        num, den = r.a, -r.b.conjugate()
    else:
        z = complex(point)
        num = r.a * z + r.b
        den = -r.b.conjugate() * z + r.a.conjugate()
    if abs(den) <= 1e-15 * max(1.0, abs(num)):
        return INF
    return num / den


def mobius_apply(r: SU2Element, c: RootConstellation) -> RootConstellation:
    """Rotate every root of the constellation; the scale stays inert."""
    return RootConstellation(c.j, c.scale, tuple(mobius_point(r, p) for p in c.roots))


def _binomial_power(base1, base0, n):
    """Ascending coefficients of (base1*zeta + base0)^n."""
    return np.array(
        [math.comb(n, k) * base1**k * base0 ** (n - k) for k in range(n + 1)]
    )


def wigner_rotate(r: SU2Element, m: Multiplet) -> Multiplet:
    """Spin-j rotation of the coefficients, done exactly on the binary form.

    P'(zeta) = sum_i c_i (conj(a) zeta - b)^i (conj(b) zeta + a)^(2j - i),
    which is the polynomial whose roots are the Mobius images of P's roots.
    """
    two_j = m.two_j
    poly = m.polynomial()
    out = np.zeros(two_j + 1, dtype=complex)
    for i in range(two_j + 1):
        if poly[i] == 0:
            continue
        term = np.convolve(
            _binomial_power(r.a.conjugate(), -r.b, i),
            _binomial_power(r.b.conjugate(), r.a, two_j - i),
        )
        out += poly[i] * term
    coeffs = [
        (out[i] / math.sqrt(math.comb(two_j, i))).conjugate() for i in range(two_j + 1)
    ]
    return Multiplet(m.j, tuple(coeffs))


def wigner_d_matrix(r: SU2Element, j) -> np.ndarray:
    """Matrix D with psi'_m = sum_m' D[m, m'] psi_m' (m ascending from -j)."""
    two_j = _two_j(j)
    dim = two_j + 1
    d = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        term = np.convolve(
            _binomial_power(r.a.conjugate(), -r.b, col),
            _binomial_power(r.b.conjugate(), r.a, two_j - col),
        )
        for row in range(dim):
            d[row, col] = term[row].conjugate() * math.sqrt(
                math.comb(two_j, col) / math.comb(two_j, row)
            )
    return d


def o2_to_vector(m: Multiplet) -> np.ndarray:
    """SO(3) vector (2 Re z1, 2 Im z1, x1) of an O(2) multiplet; |v| = sigma."""
    z1, x1 = o2_coefficients(m)
    return np.array([2 * z1.real, 2 * z1.imag, x1])


def vector_to_o2(v) -> Multiplet:
    """Inverse of o2_to_vector."""
    v = np.asarray(v, dtype=float)
    return o2_multiplet(complex(v[0], v[1]) / 2, v[2])


def random_real_multiplet(j, rng, scale=1.0) -> Multiplet:
    """Random multiplet satisfying the reality condition exactly."""
    two_j = _two_j(j)
    if two_j % 2 != 0:
        raise DomainError("random real multiplets implemented for integer j")
    half = two_j // 2
    coeffs = [0j] * (two_j + 1)
    coeffs[half] = complex(rng.standard_normal() * scale)
    for k in range(1, half + 1):
        c = complex(rng.standard_normal(), rng.standard_normal()) * scale
        coeffs[half + k] = c
        coeffs[half - k] = (-1) ** k * c.conjugate()
    return Multiplet(j, tuple(coeffs))
