"""Totally symmetric spinor tensors and the epsilon-contraction diagram engine.

A rank-2j symmetric tensor over indices in {1, 2} is stored by its 2j+1
independent components eta_(n), n = number of indices equal to 2.  Closed
diagrams (every slot contracted by an oriented epsilon edge) are evaluated
by brute force: each edge contributes eps^(AB) with eps^(12) = +1, summed
over the two nonvanishing assignments, so a diagram with E edges costs
2^E component lookups.  This is an oracle, not a production contraction
engine; the slot budget is capped accordingly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import StructuralError
from .multiplet import Multiplet

__all__ = ["Diagram", "SymmetricSpinorTensor", "contract_diagram", "polygon_diagram"]

MAX_SUMMED_INDICES = 24


@dataclass(frozen=True)
class SymmetricSpinorTensor:
    """Symmetric rank-2j tensor; components[n] = eta with n indices equal to 2."""

    rank: int
    components: tuple

    def __post_init__(self):
        if self.rank < 1:
            raise StructuralError("rank must be positive")
        comps = tuple(complex(c) for c in self.components)
        if len(comps) != self.rank + 1:
            raise StructuralError(
                f"rank-{self.rank} tensor needs {self.rank + 1} components"
            )
        object.__setattr__(self, "components", comps)

    @classmethod
    def from_multiplet(cls, m: Multiplet) -> "SymmetricSpinorTensor":
        """eta_(n) = conj(psi_(n-j)) / binom(2j, n)^(1/2)."""
        two_j = m.two_j
        comps = [
            complex(m.coeffs[n]).conjugate() / math.sqrt(math.comb(two_j, n))
            for n in range(two_j + 1)
        ]
        return cls(two_j, tuple(comps))


@dataclass(frozen=True)
class Diagram:
    """Closed contraction diagram: vertices carry tensors, edges carry epsilons.

    vertices: tuple of (tensor_id, rank)
    edges: tuple of ((v_tail, slot_tail), (v_head, slot_head), orientation)
           with orientation +1/-1; reversing an edge flips the diagram sign.
    """

    vertices: tuple
    edges: tuple

    def __post_init__(self):
        vertices = tuple((str(t), int(r)) for t, r in self.vertices)
        edges = tuple(
            ((int(a[0]), int(a[1])), (int(b[0]), int(b[1])), int(o))
            for a, b, o in self.edges
        )
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        used = set()
        for (va, sa), (vb, sb), o in edges:
            if o not in (1, -1):
                raise StructuralError("edge orientation must be +1 or -1")
            if va == vb:
                raise StructuralError("edges starting and ending on one vertex vanish identically")
            for v, s in ((va, sa), (vb, sb)):
                if v < 0 or v >= len(vertices):
                    raise StructuralError(f"edge references unknown vertex {v}")
                if s < 0 or s >= vertices[v][1]:
                    raise StructuralError(f"slot {s} out of range for vertex {v}")
                if (v, s) in used:
                    raise StructuralError(f"slot ({v},{s}) contracted twice")
                used.add((v, s))
        expected = sum(r for _, r in vertices)
        if len(used) != expected:
            raise StructuralError("diagram is not closed: some slots are open")
        if expected > MAX_SUMMED_INDICES:
            raise StructuralError(
                f"{expected} summed indices exceed the brute-force cap of {MAX_SUMMED_INDICES}"
            )


def polygon_diagram(ranks, bonds, orientations=None) -> Diagram:
    """Ring of vertices; bonds[i] parallel edges join vertex i to i+1.

    orientations[i] applies to every edge of bond i (+1 points forward
    around the ring).  Leftover slots must vanish: sum of the two adjacent
    bond counts must equal each vertex rank.
    """
    n = len(ranks)
    if len(bonds) != n:
        raise StructuralError("need one bond count per ring edge")
    if orientations is None:
        orientations = [1] * n
    for i in range(n):
        if bonds[(i - 1) % n] + bonds[i] != ranks[i]:
            raise StructuralError(f"vertex {i} slots do not match its bonds")
    vertices = tuple((f"t{i}", ranks[i]) for i in range(n))
    edges = []
    cursor = [0] * n
    for i in range(n):
        jn = (i + 1) % n
        for _ in range(bonds[i]):
            tail = (i, cursor[i])
            cursor[i] += 1
            head = (jn, cursor[jn])
            cursor[jn] += 1
            edges.append((tail, head, orientations[i]))
    return Diagram(vertices, tuple(edges))


def contract_diagram(d: Diagram, tensors) -> complex:
    """Brute-force value of a closed diagram.

    tensors maps tensor-id -> SymmetricSpinorTensor; every vertex id must
    resolve and the ranks must match.  Deterministic: fixed enumeration
    order with a compensated final reduction.
    """
    comps = []
    for tid, rank in d.vertices:
        if tid not in tensors:
            raise StructuralError(f"no tensor supplied for id {tid!r}")
        t = tensors[tid]
        if t.rank != rank:
            raise StructuralError(f"tensor {tid!r} has rank {t.rank}, vertex wants {rank}")
        comps.append(np.asarray(t.components))

    n_edges = len(d.edges)
    masks = np.arange(1 << n_edges, dtype=np.int64)
    # bit e = 0: (A,B) = (1,2) with weight +1;  bit e = 1: (A,B) = (2,1), weight -1
    bits = (masks[:, None] >> np.arange(n_edges)) & 1

    counts = [np.zeros(len(masks), dtype=np.int64) for _ in d.vertices]
    sign_flips = np.zeros(len(masks), dtype=np.int64)
    for e, ((va, _), (vb, _), orient) in enumerate(d.edges):
        counts[va] += bits[:, e]
        counts[vb] += 1 - bits[:, e]
        sign_flips += bits[:, e]
        if orient < 0:
            sign_flips += 1

    values = np.where(sign_flips % 2 == 0, 1.0, -1.0).astype(complex)
    for v, cnt in enumerate(counts):
        values *= comps[v][cnt]
    return complex(math.fsum(values.real), math.fsum(values.imag))
