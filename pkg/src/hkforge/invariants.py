"""SU(2) rotational invariants of O(2), O(4) and mixed multiplet systems.

Closed-form Majorana-coefficient expressions, the epsilon-contraction
diagram identities they satisfy, tetrahedral Q-factors, the lambda-coupled
family, and the quantum-amplitude representation with its Cauchy-Schwarz
bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .multiplet import (
    Multiplet,
    RootConstellation,
    o2_coefficients,
    o2_multiplet,
    o4_coefficients,
    o4_multiplet,
    unit_vector,
)
from .spintensor import Diagram, SymmetricSpinorTensor, contract_diagram, polygon_diagram
from .wigner3j import clebsch_gordan

__all__ = [
    "InvariantSet",
    "amplitude_couplings",
    "angular_invariants",
    "g_sigma2",
    "invariant_set",
    "lambda_family",
    "mixed_invariants",
    "o2_squared",
    "o4_basic_invariants",
    "paper_diagram",
    "paper_diagram_names",
    "paper_diagram_prediction",
    "q_factors",
]


# ---------------------------------------------------------------------------
# closed-form invariants
# ---------------------------------------------------------------------------

def g_sigma2(m: Multiplet) -> float:
    """O(2) radial invariant g_sigma2 = 4|z1|^2 + x1^2 = sigma^2."""
    z1, x1 = o2_coefficients(m)
    return 4 * abs(z1) ** 2 + x1**2


def o4_basic_invariants(m: Multiplet):
    """O(4) pair (g_rho2, g_rho3) in Majorana coefficients."""
    z2, v2, x2 = o4_coefficients(m)
    g2 = 4 * abs(z2) ** 2 + abs(v2) ** 2 + x2**2 / 3
    g3 = (
        (8 / 3) * abs(z2) ** 2 * x2
        - abs(v2) ** 2 * x2 / 3
        - (2 / 27) * x2**3
        - (z2 * v2.conjugate() ** 2 + z2.conjugate() * v2**2).real
    )
    return g2, g3


def mixed_invariants(m2: Multiplet, m4: Multiplet):
    """Mixed pair (g_rho_sigma2, g_rho2_sigma2) in Majorana coefficients."""
    z1, x1 = o2_coefficients(m2)
    z2, v2, x2 = o4_coefficients(m4)
    zc1, zc2, vc2 = z1.conjugate(), z2.conjugate(), v2.conjugate()
    r1 = x1**2 - 2 * abs(z1) ** 2
    grs = (2 / 3) * x2 * r1 + (4 * z2 * zc1**2 + 4 * zc2 * z1**2).real + (
        2 * v2 * zc1 * x1 + 2 * vc2 * z1 * x1
    ).real
    grrs = (
        (8 * abs(z2) ** 2 - abs(v2) ** 2 - (2 / 3) * x2**2) * r1
        + (-12 * z2 * vc2 * zc1 * x1 - 12 * zc2 * v2 * z1 * x1).real
        + (8 * z2 * x2 * zc1**2 + 8 * zc2 * x2 * z1**2).real
        + (-2 * v2 * x2 * zc1 * x1 - 2 * vc2 * x2 * z1 * x1).real
        + (-3 * v2**2 * zc1**2 - 3 * vc2**2 * z1**2).real
    )
    return grs, grrs


def angular_invariants(m2: Multiplet, m4: Multiplet):
    """Angular pair A = g_rs2/(sqrt(3 g_r2) g_s2), B = -g_r2s2/(3 g_r2 g_s2)."""
    gs = g_sigma2(m2)
    gr2, _ = o4_basic_invariants(m4)
    if gs <= 0 or gr2 <= 0:
        raise DomainError("angular invariants need nonzero radial invariants")
    grs, grrs = mixed_invariants(m2, m4)
    return grs / (math.sqrt(3 * gr2) * gs), -grrs / (3 * gr2 * gs)


def q_factors(c2: RootConstellation, c4: RootConstellation):
    """(Q0^2, Q+^2, Q-^2) of the root triple (alpha, beta; gamma).

    Q0^2 is the Gram determinant of the three unit vectors, equal to 36
    times the squared volume of the tetrahedron they span with the center.
    """
    if c2.two_j != 2 or c4.two_j != 4:
        raise DomainError("q_factors needs an O(2) and an O(4) constellation")
    gamma = c2.roots[0]
    alpha, beta = c4.roots
    na, nb, ng = unit_vector(alpha), unit_vector(beta), unit_vector(gamma)
    cag, cbg, cab = float(na @ ng), float(nb @ ng), float(na @ nb)
    gram = np.array([[1.0, cag, cab], [cag, 1.0, cbg], [cab, cbg, 1.0]])
    q0sq = float(np.linalg.det(gram))
    return q0sq, (cag + cbg) ** 2, (cag - cbg) ** 2


def tetrahedron_q0sq(c2: RootConstellation, c4: RootConstellation) -> float:
    """Q0^2 via 36 Vol^2 of the tetrahedron OABC: the independent route."""
    gamma = c2.roots[0]
    alpha, beta = c4.roots
    mat = np.column_stack([unit_vector(alpha), unit_vector(beta), unit_vector(gamma)])
    vol = abs(np.linalg.det(mat)) / 6.0
    return 36.0 * vol**2


def o2_squared(m2: Multiplet) -> Multiplet:
    """The O(4) multiplet (eta^(2))^2."""
    z1, x1 = o2_coefficients(m2)
    return o4_multiplet(z1**2, 2 * x1 * z1, x1**2 - 2 * abs(z1) ** 2)


def lambda_family(m2: Multiplet, m4: Multiplet, lam: float):
    """(g2(lambda), g3(lambda)) of the combination eta^(4) - lambda (eta^(2))^2."""
    gs = g_sigma2(m2)
    gr2, gr3 = o4_basic_invariants(m4)
    grs, grrs = mixed_invariants(m2, m4)
    u = lam / 3.0
    g2l = gr2 - 3 * grs * u + 3 * gs**2 * u**2
    g3l = gr3 - grrs * u - 3 * grs * gs * u**2 + 2 * gs**3 * u**3
    return g2l, g3l


def lambda_family_direct(m2: Multiplet, m4: Multiplet, lam: float):
    """Oracle route: form eta^(4) - lambda (eta^(2))^2 literally and reduce it."""
    sq = o2_squared(m2)
    combo = Multiplet(
        2.0, tuple(c4 - lam * cs for c4, cs in zip(m4.coeffs, sq.coeffs))
    )
    return o4_basic_invariants(combo)


@dataclass(frozen=True)
class InvariantSet:
    """All scalar invariants of an O(2)+O(4) pair (squares for the Q's)."""

    g_sigma2: float
    g_rho2: float
    g_rho3: float
    g_rho_sigma2: float
    g_rho2_sigma2: float
    a_angular: float
    b_angular: float
    q0_sq: float
    qplus_sq: float
    qminus_sq: float


def invariant_set(m2: Multiplet, m4: Multiplet, constellations=None) -> InvariantSet:
    from .multiplet import coefficients_to_roots

    gs = g_sigma2(m2)
    gr2, gr3 = o4_basic_invariants(m4)
    grs, grrs = mixed_invariants(m2, m4)
    a, b = angular_invariants(m2, m4)
    if constellations is None:
        constellations = (coefficients_to_roots(m2), coefficients_to_roots(m4))
    q0, qp, qm = q_factors(*constellations)
    return InvariantSet(gs, gr2, gr3, grs, grrs, a, b, q0, qp, qm)


# ---------------------------------------------------------------------------
# paper diagrams: frozen graph data and predicted reductions
# ---------------------------------------------------------------------------

def _alternating(n):
    return tuple(1 if i % 2 == 0 else -1 for i in range(n))


def _bond_graph(ranks, bonds):
    """Diagram from a multigraph given as {(i, j): count} with i < j."""
    vertices = tuple((f"t{i}", r) for i, r in enumerate(ranks))
    cursor = [0] * len(ranks)
    edges = []
    for (i, j), count in sorted(bonds.items()):
        for _ in range(count):
            edges.append(((i, cursor[i]), (j, cursor[j]), 1))
            cursor[i] += 1
            cursor[j] += 1
    return Diagram(vertices, tuple(edges))


def paper_diagram(name: str) -> Diagram:
    """One of the named figure diagrams, as frozen graph data."""
    if name.startswith("o2_polygon_"):
        n = int(name.rsplit("_", 1)[1])
        orients = _alternating(n) if n % 2 == 0 else None
        return polygon_diagram((2,) * n, (1,) * n, orients)
    if name.startswith("o4_ring_"):
        n = int(name.rsplit("_", 1)[1])
        return polygon_diagram((4,) * n, (2,) * n)
    if name == "mixed_def_rs2":
        return _bond_graph((4, 2, 2), {(0, 1): 2, (0, 2): 2})
    if name == "mixed_def_r2s2":
        return _bond_graph((2, 2, 4, 4), {(0, 2): 2, (1, 3): 2, (2, 3): 2})
    if name == "mixed_example_1":
        return _bond_graph((2, 2, 4, 4), {(0, 1): 1, (0, 2): 1, (1, 3): 1, (2, 3): 3})
    if name == "mixed_example_2":
        return _bond_graph((2, 2, 4, 4), {(0, 2): 1, (0, 3): 1, (1, 2): 1, (1, 3): 1, (2, 3): 2})
    if name == "mixed_example_3":
        return _bond_graph(
            (4, 4, 2, 2, 2, 2),
            {(0, i): 1 for i in range(2, 6)} | {(1, i): 1 for i in range(2, 6)},
        )
    raise DomainError(f"unknown paper diagram {name!r}")


def paper_diagram_names():
    return (
        ["o2_polygon_2", "o2_polygon_3", "o2_polygon_4", "o2_polygon_5", "o2_polygon_6"]
        + ["o4_ring_2", "o4_ring_3", "o4_ring_4", "o4_ring_5", "o4_ring_6"]
        + [
            "mixed_def_rs2",
            "mixed_def_r2s2",
            "mixed_example_1",
            "mixed_example_2",
            "mixed_example_3",
        ]
    )


def paper_diagram_prediction(name: str, m2: Multiplet, m4: Multiplet) -> float:
    """Closed-form value each figure diagram reduces to."""
    gs = g_sigma2(m2) if m2 is not None else None
    if name.startswith("o2_polygon_"):
        n = int(name.rsplit("_", 1)[1])
        if n % 2 == 1:
            return 0.0
        k = n // 2
        return (-1) ** k * gs**k / 2 ** (2 * k - 1)
    gr2, gr3 = o4_basic_invariants(m4) if m4 is not None else (None, None)
    if name.startswith("o4_ring_"):
        n = int(name.rsplit("_", 1)[1])
        return {
            2: gr2 / 2,
            3: (3 / 8) * gr3,
            4: gr2**2 / 8,
            5: (5 / 32) * gr2 * gr3,
            6: (2 * gr2**3 + 3 * gr3**2) / 64,
        }[n]
    grs, grrs = mixed_invariants(m2, m4)
    return {
        "mixed_def_rs2": grs / 4,
        "mixed_def_r2s2": (grrs - 2 * gr2 * gs) / 24,
        "mixed_example_1": -gr2 * gs / 8,
        "mixed_example_2": (grrs + gr2 * gs) / 24,
        "mixed_example_3": (6 * grs**2 + 2 * grrs * gs - gr2 * gs**2) / 96,
    }[name]


def diagram_value(name: str, m2: Multiplet, m4: Multiplet) -> complex:
    """Brute-force value of a named figure diagram on the given multiplets."""
    d = paper_diagram(name)
    tensors = {}
    for tid, rank in d.vertices:
        source = m2 if rank == 2 else m4
        if source is None:
            raise DomainError(f"diagram {name!r} needs a rank-{rank} multiplet")
        tensors[tid] = SymmetricSpinorTensor.from_multiplet(source)
    return contract_diagram(d, tensors)


# ---------------------------------------------------------------------------
# quantum-amplitude representation
# ---------------------------------------------------------------------------

def _couple(psi_a, ja, psi_b, jb, j_total):
    """Spin-j_total component of |psi_a (x) psi_b> in the m-ascending basis."""
    dim = int(round(2 * j_total)) + 1
    out = np.zeros(dim, dtype=complex)
    for ia, ca in enumerate(psi_a):
        ma = ia - ja
        for ib, cb in enumerate(psi_b):
            mb = ib - jb
            m = ma + mb
            if abs(m) > j_total:
                continue
            cg = clebsch_gordan(ja, ma, jb, mb, j_total, m)
            if cg:
                out[int(round(m + j_total))] += cg * ca * cb
    return out


def _pair(bra, ket) -> complex:
    return complex(np.vdot(bra, ket))


@dataclass(frozen=True)
class AmplitudeReport:
    """Hilbert scalar products of the coupled states and their predicted values."""

    amplitudes: dict
    predicted: dict


def amplitude_couplings(m2: Multiplet, m4: Multiplet) -> AmplitudeReport:
    """All the Hilbert scalar products the invariants are proportional to.

    Spherical-tensor couplings are done with exact Clebsch-Gordan
    coefficients; <psi2 (x) psi2 | psi4 (x) psi4> pairs the two tensor
    products irrep by irrep (J = 0, 1, 2).
    """
    psi2 = np.asarray(m2.coeffs)
    psi4 = np.asarray(m4.coeffs)
    gs = g_sigma2(m2)
    gr2, gr3 = o4_basic_invariants(m4)
    grs, grrs = mixed_invariants(m2, m4)

    t22 = {j: _couple(psi2, 1, psi2, 1, j) for j in (0, 1, 2)}
    t44 = {j: _couple(psi4, 2, psi4, 2, j) for j in (0, 1, 2)}
    t24_1 = _couple(psi2, 1, psi4, 2, 1)
    t24_2 = _couple(psi2, 1, psi4, 2, 2)

    amplitudes = {
        "norm2_sq": complex(np.vdot(psi2, psi2)),
        "norm4_sq": complex(np.vdot(psi4, psi4)),
        "<4|4x4>": _pair(psi4, t44[2]),
        "<2|2x4>": _pair(psi2, t24_1),
        "<4|2x2>": _pair(psi4, t22[2]),
        "<2x2|4x4>": sum(_pair(t22[j], t44[j]) for j in (0, 1, 2)),
        "<2|4>": 0j,  # distinct irreps: orthogonal by construction
        "<2|4x4>": _pair(psi2, t44[1]),
        "<4|2x4>": _pair(psi4, t24_2),
    }
    predicted = {
        "norm2_sq": gs / 2,
        "norm4_sq": gr2 / 2,
        "<4|4x4>": 9 / (4 * math.sqrt(21)) * gr3,
        "<2|2x4>": -3 / (4 * math.sqrt(15)) * grs,
        "<4|2x2>": grs / 4,
        "<2x2|4x4>": grrs / (4 * math.sqrt(21)) - gr2 * gs / (4 * math.sqrt(15)),
        "<2|4>": 0.0,
        "<2|4x4>": 0.0,
        "<4|2x4>": 0.0,
    }
    return AmplitudeReport(amplitudes, predicted)


def cauchy_schwarz_bounds(m2: Multiplet, m4: Multiplet):
    """(|g_rs2|/(sqrt(g_r2) g_s2), ratio bound sqrt(2));
    (g_r2s2/(g_r2 g_s2), lower, upper) for the second angular bound."""
    gs = g_sigma2(m2)
    gr2, _ = o4_basic_invariants(m4)
    grs, grrs = mixed_invariants(m2, m4)
    first = abs(grs) / (math.sqrt(gr2) * gs)
    second = grrs / (gr2 * gs)
    lo = -math.sqrt(7 / 5) * (math.sqrt(15) - 1)
    hi = math.sqrt(7 / 5) * (math.sqrt(15) + 1)
    return (first, math.sqrt(2)), (second, lo, hi)
