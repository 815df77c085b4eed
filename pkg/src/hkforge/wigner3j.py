"""Exact Clebsch-Gordan and Wigner 3j coefficients via the Racah formula.

All intermediate arithmetic is rational (Fraction); the square root is the
only floating-point step, so orthogonality sums cancel to machine epsilon.
Arguments are ordinary (half-)integers; everything the library needs stays
at j <= 4.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

__all__ = ["clebsch_gordan", "wigner_3j"]


def _fact(n: int) -> int:
    if n < 0:
        raise ValueError("negative factorial")
    return math.factorial(n)


def _as_two(x) -> int:
    two = int(round(2 * x))
    if abs(2 * x - two) > 1e-9:
        raise ValueError(f"{x} is not a half-integer")
    return two


@lru_cache(maxsize=None)
def _cg_two(tj1, tm1, tj2, tm2, tj, tm) -> float:
    if tm1 + tm2 != tm:
        return 0.0
    if not (abs(tj1 - tj2) <= tj <= tj1 + tj2):
        return 0.0
    if (tj1 + tj2 + tj) % 2 != 0:
        return 0.0
    if abs(tm1) > tj1 or abs(tm2) > tj2 or abs(tm) > tj:
        return 0.0
    if (tj1 + tm1) % 2 != 0 or (tj2 + tm2) % 2 != 0 or (tj + tm) % 2 != 0:
        return 0.0

    def h(x):  # doubled arg -> integer
        if x % 2 != 0:
            raise ValueError("non-integer factorial argument")
        return x // 2

    pref = Fraction(
        (tj + 1)
        * _fact(h(tj1 + tj2 - tj))
        * _fact(h(tj1 - tj2 + tj))
        * _fact(h(-tj1 + tj2 + tj))
        * _fact(h(tj + tm))
        * _fact(h(tj - tm))
        * _fact(h(tj1 + tm1))
        * _fact(h(tj1 - tm1))
        * _fact(h(tj2 + tm2))
        * _fact(h(tj2 - tm2)),
        _fact(h(tj1 + tj2 + tj) + 1),
    )

    ksum = Fraction(0)
    kmin = max(0, h(tj2 - tj - tm1), h(tj1 + tm2 - tj))
    kmax = min(h(tj1 + tj2 - tj), h(tj1 - tm1), h(tj2 + tm2))
    for k in range(kmin, kmax + 1):
        term = Fraction(
            (-1) ** k,
            _fact(k)
            * _fact(h(tj1 + tj2 - tj) - k)
            * _fact(h(tj1 - tm1) - k)
            * _fact(h(tj2 + tm2) - k)
            * _fact(h(tj - tj2 + tm1) + k)
            * _fact(h(tj - tj1 - tm2) + k),
        )
        ksum += term
    if ksum == 0:
        return 0.0
    sign = 1 if ksum > 0 else -1
    return sign * math.sqrt(float(pref * ksum * ksum))


def clebsch_gordan(j1, m1, j2, m2, j, m) -> float:
    """<j1 m1 j2 m2 | j m> in the Condon-Shortley convention."""
    return _cg_two(_as_two(j1), _as_two(m1), _as_two(j2), _as_two(m2), _as_two(j), _as_two(m))


def wigner_3j(j1, j2, j3, m1, m2, m3) -> float:
    """Wigner 3j symbol (j1 j2 j3; m1 m2 m3)."""
    tj1, tj2, tj3 = _as_two(j1), _as_two(j2), _as_two(j3)
    cg = _cg_two(tj1, _as_two(m1), tj2, _as_two(m2), tj3, -_as_two(m3))
    if cg == 0.0:
        return 0.0
    phase = (-1) ** (((tj1 - tj2 - _as_two(m3)) // 2) % 2)
    return phase * cg / math.sqrt(tj3 + 1)
