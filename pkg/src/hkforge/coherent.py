"""Spin-coherent-state geometry on the Riemann sphere.

Points are stereographic coordinates (complex or INF).  All overlap
formulas are evaluated through normalized homogeneous spinors so the point
at infinity needs no special-casing and nothing overflows.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .multiplet import (
    INF,
    Multiplet,
    antipode,
    coefficients_to_roots,
    is_inf,
    _spinor,
)

__all__ = [
    "Overlap",
    "antipodal",
    "coherent_overlap",
    "cyclic_phase",
    "fubini_study_distance",
    "penrose_factorize",
]

ANTIPODAL_TOL = 1e-12


@dataclass(frozen=True)
class Overlap:
    """Complex overlap together with its modulus and phase in (-pi, pi]."""

    value: complex
    modulus: float
    phase: float


def _half_overlap(alpha, beta) -> complex:
    """Spin-1/2 overlap <alpha|beta> = (1 + conj(alpha) beta)/norms."""
    (u1, u2), (v1, v2) = _spinor(alpha), _spinor(beta)
    return u1.conjugate() * v1 + u2.conjugate() * v2


def coherent_overlap(alpha, beta, j) -> Overlap:
    """<alpha|beta> for spin j: the spin-1/2 overlap raised to the 2j power."""
    two_j = int(round(2 * j))
    if two_j < 1 or abs(two_j - 2 * j) > 1e-12:
        raise DomainError(f"spin must be a positive half-integer, got {j}")
    value = _half_overlap(alpha, beta) ** two_j
    return Overlap(value, abs(value), cmath.phase(value))


def antipodal(alpha, beta, tol: float = ANTIPODAL_TOL) -> bool:
    """True when beta sits at the antipode of alpha (chordal k below tol)."""
    return abs(_half_overlap(alpha, beta)) < tol


def fubini_study_distance(alpha, beta) -> float:
    """Geodesic distance delta = 2 arccos k = 2 arcsin k' on the unit sphere."""
    (u1, u2), (v1, v2) = _spinor(alpha), _spinor(beta)
    k = abs(u1.conjugate() * v1 + u2.conjugate() * v2)
    kprime = abs(u1 * v2 - u2 * v1)
    return 2.0 * math.atan2(kprime, k)


def cyclic_phase(points):
    """Modulus product and accumulated phase of a closed coherent cycle.

    The phase equals half the area of the spherical polygon with the given
    vertices, mod 2pi; it is reported in (-pi, pi] and flips sign under
    orientation reversal.
    """
    pts = list(points)
    if len(pts) < 3:
        raise DomainError("a spherical polygon needs at least 3 vertices")
    product = 1 + 0j
    for p, q in zip(pts, pts[1:] + pts[:1]):
        amp = _half_overlap(p, q)
        if abs(amp) < ANTIPODAL_TOL:
            raise DomainError("consecutive vertices are antipodal: degenerate polygon")
        product *= amp
    return abs(product), cmath.phase(product)


def penrose_factorize(m: Multiplet):
    """Principal-spinor directions of a real multiplet, with multiplicities.

    Returns the full root multiset (both members of every antipodal pair) as
    (point, multiplicity) entries; the multiplicities add up to 2j.
    """
    if float(np.max(np.abs(m.coeffs))) == 0.0:
        raise DomainError("zero multiplet has no principal directions")
    constellation = coefficients_to_roots(m)
    directions = []
    for rep in constellation.roots:
        for point in (rep, antipode(rep)):
            for k, (seen, mult) in enumerate(directions):
                if _coincident(seen, point):
                    directions[k] = (seen, mult + 1)
                    break
            else:
                directions.append((point, 1))
    return directions


def _coincident(p, q, tol=1e-8) -> bool:
    if is_inf(p) and is_inf(q):
        return True
    (u1, u2), (v1, v2) = _spinor(p), _spinor(q)
    return abs(u1 * v2 - u2 * v1) < tol
