"""The antisymmetric and symmetric-traceless rank-5 projectors, and the two
6-valent interaction kernels.

Vertex slots are numbered by half-edge h in 1..6 (a..f) and index position
k in 1..5 as endpoint 5(h-1)+k.  The kernels are fixed 15-pair matchings on
those 30 endpoints.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Tuple

from .diagrams import (DiagramOperator, Pairing, all_pairings, classify_pairing,
                       compose_operators, perm_sign, permutation_pairing, trace_close,
                       unbroken_permutations)
from .exactpoly import RatPolyN

CYCLIC_PATTERN = ("a1f5 a2e4 a3d3 a4c2 a5b1 b2f4 b3e3 b4d2 b5c1 "
                  "c3f3 c4e2 c5d1 d4f2 d5e1 e5f1")
COLORABLE_PATTERN = ("a1f1 a2e2 a3d3 a4c4 a5b5 b3f3 b4e4 b2d2 b1c1 "
                     "c2f2 c3e3 c5d5 d4f4 d1e1 e5f5")


def slot_index(h: int, k: int) -> int:
    """1-based endpoint of index position k on half-edge h (both 1-based)."""
    return 5 * (h - 1) + k


def _parse_pattern(text: str) -> Pairing:
    pairs = []
    for tok in text.split():
        h1, k1, h2, k2 = tok[0], int(tok[1]), tok[2], int(tok[3])
        pairs.append((slot_index("abcdef".index(h1) + 1, k1),
                      slot_index("abcdef".index(h2) + 1, k2)))
    return Pairing(pairs, 15)


@dataclass(frozen=True)
class VertexKernel:
    matching: Pairing
    flavor: str

    @property
    def corners(self) -> Dict[Tuple[int, int], Tuple[int, int]]:
        """0-based (position, slot) -> partner (position, slot)."""
        return _corner_table(self.matching)

    def rotated(self, shift: int = 1) -> Pairing:
        """The matching after relabeling half-edge h as h+shift (mod 6)."""

        def move(x):
            h, k = divmod(x - 1, 5)
            return 5 * ((h + shift) % 6) + k + 1

        return Pairing(((move(a), move(b)) for a, b in self.matching), 15)

    def is_rotation_invariant(self) -> bool:
        return self.rotated(1) == self.matching


@lru_cache(maxsize=None)
def _corner_table(matching: Pairing):
    out = {}
    for a, b in matching:
        pa, pb = divmod(a - 1, 5), divmod(b - 1, 5)
        out[pa] = pb
        out[pb] = pa
    return out


@lru_cache(maxsize=None)
def build_vertex(flavor: str = "cyclic") -> VertexKernel:
    if flavor == "cyclic":
        k = VertexKernel(_parse_pattern(CYCLIC_PATTERN), "cyclic")
    elif flavor == "colorable":
        k = VertexKernel(_parse_pattern(COLORABLE_PATTERN), "colorable")
    else:
        raise ValueError(f"unknown vertex flavor {flavor!r}")
    for a, b in k.matching:
        if (a - 1) // 5 == (b - 1) // 5:
            raise AssertionError("kernel pairs two slots of one half-edge")
    return k


@lru_cache(maxsize=None)
def build_antisymmetric() -> DiagramOperator:
    terms = {}
    for perm in unbroken_permutations(5):
        terms[permutation_pairing(perm)] = RatPolyN.const(perm_sign(perm)) / 120
    return DiagramOperator(terms, 5)


# Per-pairing weight of each edge class in the symmetric-traceless projector.
# The double-trace weight is 8/(120(N+4)(N+6)): each of the 225 doubly-broken
# pairings collects the four orderings of its two same-side pairs.  With 2 in
# place of 8 the operator is not idempotent and its trace is not a polynomial.
SYMMETRIC_PREFACTORS = {"unbroken": (1, ()), "broken": (-2, (6,)), "doubly_broken": (8, (4, 6))}


def symmetric_weight(tag: str) -> RatPolyN:
    c, shifts = SYMMETRIC_PREFACTORS[tag]
    N = RatPolyN.var()
    w = RatPolyN.const(c) / 120
    for s in shifts:
        w = w / (N + s)
    return w


@lru_cache(maxsize=None)
def build_symmetric_traceless() -> DiagramOperator:
    weights = {tag: symmetric_weight(tag) for tag in SYMMETRIC_PREFACTORS}
    return DiagramOperator({p: weights[classify_pairing(p).tag] for p in all_pairings(5)}, 5)


def build_projector(rep: str) -> DiagramOperator:
    if rep == "A":
        return build_antisymmetric()
    if rep == "S":
        return build_symmetric_traceless()
    raise ValueError(f"unknown representation {rep!r}; expected 'A' or 'S'")


def verify_projector(P: DiagramOperator) -> dict:
    return {
        "idempotent": compose_operators(P, P) == P,
        "symmetric": P.transpose() == P,
        "dimension": trace_close(P),
    }
