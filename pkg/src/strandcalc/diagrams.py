"""Pairing diagrams (Brauer-type) on 2m labeled strand endpoints.

Endpoints 1..m form the "in" side and m+1..2m the "out" side.  A
``Pairing`` is a perfect matching stored as a sorted tuple of sorted pairs,
so it is canonical and hashable.  Operators are sparse sums of pairings with
``RatPolyN`` weights; composing two of them glues the out side of the first
to the in side of the second, and every closed loop contributes a factor N.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Dict, Iterable, Iterator, Optional, Tuple

from .exactpoly import RatPolyN


class Pairing(tuple):
    """Perfect matching on endpoints 1..2m, as sorted pairs."""

    __slots__ = ()

    def __new__(cls, pairs: Iterable, m: Optional[int] = None):
        ps = tuple(sorted(tuple(sorted((int(a), int(b)))) for a, b in pairs))
        obj = super().__new__(cls, ps)
        pts = [x for p in ps for x in p]
        size = len(pts) // 2 if m is None else m
        if sorted(pts) != list(range(1, 2 * size + 1)):
            raise ValueError(f"not a perfect matching on 1..{2 * size}: {ps}")
        return obj

    @property
    def m(self) -> int:
        return len(self)

    def partner_map(self) -> Dict[int, int]:
        out = {}
        for a, b in self:
            out[a] = b
            out[b] = a
        return out

    def transpose(self) -> "Pairing":
        m = self.m

        def swap(x):
            return x + m if x <= m else x - m

        return Pairing((swap(a), swap(b)) for a, b in self)

    def to_json(self):
        return [list(p) for p in self]

    @classmethod
    def from_json(cls, obj) -> "Pairing":
        return cls(obj)

    def __repr__(self):
        return f"Pairing({list(self)})"


def identity_pairing(m: int = 5) -> Pairing:
    return Pairing((i, m + i) for i in range(1, m + 1))


def permutation_pairing(perm) -> Pairing:
    """Unbroken pairing sending in-point i to out-point m + perm[i-1].

    ``perm`` is a 0-based permutation tuple."""
    m = len(perm)
    return Pairing((i + 1, m + perm[i] + 1) for i in range(m))


def all_pairings(m: int = 5) -> Iterator[Pairing]:
    """All (2m-1)!! perfect matchings on 2m endpoints, in lexicographic order."""

    def rec(rest):
        if not rest:
            yield ()
            return
        a = rest[0]
        for j in range(1, len(rest)):
            b = rest[j]
            for tail in rec(rest[1:j] + rest[j + 1:]):
                yield ((a, b),) + tail

    for ps in rec(tuple(range(1, 2 * m + 1))):
        yield Pairing(ps)


def perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


# ---------------------------------------------------------------- edge classes

@dataclass(frozen=True)
class EdgeClass:
    tag: str  # "unbroken", "broken", "doubly_broken"
    perm: Optional[Tuple[int, ...]] = None  # 0-based, only when unbroken

    def __str__(self):
        return self.tag if self.perm is None else f"unbroken{self.perm}"


@lru_cache(maxsize=None)
def classify_pairing(p: Pairing) -> EdgeClass:
    m = p.m
    same_in = sum(1 for a, b in p if b <= m)
    if same_in == 0:
        perm = [0] * m
        for a, b in p:
            perm[a - 1] = b - m - 1
        return EdgeClass("unbroken", tuple(perm))
    if m == 5 and same_in == 1:
        return EdgeClass("broken")
    if m == 5 and same_in == 2:
        return EdgeClass("doubly_broken")
    return EdgeClass(f"broken{same_in}")


def edge_census(m: int = 5) -> Dict[str, int]:
    out: Dict[str, int] = defaultdict(int)
    for p in all_pairings(m):
        out[classify_pairing(p).tag] += 1
    return dict(out)


# ----------------------------------------------------------------- gluing

def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _union(parent, a, b):
    ra, rb = _find(parent, a), _find(parent, b)
    if ra != rb:
        parent[ra] = rb


@lru_cache(maxsize=None)
def _partners(p: Pairing) -> Tuple[int, ...]:
    out = [0] * (2 * p.m + 1)
    for a, b in p:
        out[a] = b
        out[b] = a
    return tuple(out)


def _trusted(pairs) -> Pairing:
    return tuple.__new__(Pairing, tuple(sorted(pairs)))


@lru_cache(maxsize=1 << 20)
def compose_pairings(a: Pairing, b: Pairing) -> Tuple[Pairing, int]:
    """Glue a's out side to b's in side.  Returns (result, closed loops).

    Glued point g (1..m) is a's endpoint m+g and b's endpoint g.  Open
    strands are followed from each free endpoint; glued points never
    visited afterwards lie on closed loops."""
    m = a.m
    if b.m != m:
        raise ValueError("arity mismatch")
    pa, pb = _partners(a), _partners(b)
    seen = [False] * (m + 1)

    def leave_a(x):
        # strand enters a at endpoint x; return the free result endpoint
        while True:
            y = pa[x]
            if y <= m:
                return y
            g = y - m
            seen[g] = True
            z = pb[g]
            if z > m:
                return z
            seen[z] = True
            x = m + z

    pairs = set()
    for x in range(1, m + 1):
        y = leave_a(x)
        pairs.add((x, y) if x < y else (y, x))
    for x in range(m + 1, 2 * m + 1):
        z = pb[x]
        if z > m:
            pairs.add((x, z) if x < z else (z, x))
        else:
            seen[z] = True
            y = leave_a(m + z)
            pairs.add((y, x) if y < x else (x, y))
    loops = 0
    for g in range(1, m + 1):
        if seen[g]:
            continue
        loops += 1
        while not seen[g]:
            seen[g] = True
            h = pb[g]
            seen[h] = True
            g = pa[m + h] - m
    return _trusted(pairs), loops


def closure_cycles(p: Pairing) -> int:
    """Number of loops after joining in-point i to out-point m+i."""
    m = p.m
    parent = list(range(2 * m))
    for x, y in p:
        _union(parent, x - 1, y - 1)
    for i in range(m):
        _union(parent, i, m + i)
    return len({_find(parent, x) for x in range(2 * m)})


# ----------------------------------------------------------------- operators

class DiagramOperator:
    """Sparse weighted sum of pairings of a fixed arity."""

    __slots__ = ("terms", "arity")

    def __init__(self, terms: Optional[dict] = None, arity: int = 5):
        self.arity = arity
        self.terms: Dict[Pairing, RatPolyN] = {}
        for p, w in (terms or {}).items():
            if p.m != arity:
                raise ValueError(f"pairing of arity {p.m} in arity-{arity} operator")
            w = RatPolyN._coerce(w)
            if not w.is_zero():
                self.terms[p] = w

    @classmethod
    def identity(cls, m: int = 5) -> "DiagramOperator":
        return cls({identity_pairing(m): RatPolyN.const(1)}, m)

    @classmethod
    def single(cls, p: Pairing, weight=1) -> "DiagramOperator":
        return cls({p: RatPolyN._coerce(weight)}, p.m)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return (isinstance(other, DiagramOperator) and self.arity == other.arity
                and self.terms == other.terms)

    def __add__(self, other):
        out = dict(self.terms)
        for p, w in other.terms.items():
            out[p] = out[p] + w if p in out else w
        return DiagramOperator(out, self.arity)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "DiagramOperator":
        c = RatPolyN._coerce(c)
        return DiagramOperator({p: w * c for p, w in self.terms.items()}, self.arity)

    def transpose(self) -> "DiagramOperator":
        return DiagramOperator({p.transpose(): w for p, w in self.terms.items()},
                               self.arity)

    def __matmul__(self, other):
        return compose_operators(self, other)

    def to_json(self):
        return [{"pairing": p.to_json(), "weight": w.to_json()}
                for p, w in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, obj, arity: int = 5) -> "DiagramOperator":
        return cls({Pairing(t["pairing"]): RatPolyN.from_json(t["weight"])
                    for t in obj}, arity)

    def __repr__(self):
        return f"DiagramOperator(arity={self.arity}, terms={len(self.terms)})"


def _classes(op: DiagramOperator):
    index: Dict[RatPolyN, int] = {}
    table = []
    items = []
    for p, w in op.terms.items():
        if w not in index:
            index[w] = len(table)
            table.append(w)
        items.append((p, index[w]))
    return items, table


def compose_operators(a: DiagramOperator, b: DiagramOperator) -> DiagramOperator:
    """a then b: glue a's out side to b's in side, one factor N per loop."""
    if a.arity != b.arity:
        raise ValueError(f"arity mismatch: {a.arity} vs {b.arity}")
    ia, wa = _classes(a)
    ib, wb = _classes(b)
    # result pairing -> (class_a, class_b) -> loop-count histogram
    acc: Dict[Pairing, Dict[Tuple[int, int], Dict[int, int]]] = {}
    for p, ca in ia:
        for q, cb in ib:
            r, loops = compose_pairings(p, q)
            hist = acc.setdefault(r, {}).setdefault((ca, cb), {})
            hist[loops] = hist.get(loops, 0) + 1
    out = {}
    for r, per in acc.items():
        total = RatPolyN.const(0)
        for (ca, cb), hist in per.items():
            top = max(hist)
            poly = RatPolyN.poly([hist.get(k, 0) for k in range(top + 1)])
            total = total + wa[ca] * wb[cb] * poly
        if not total.is_zero():
            out[r] = total
    return DiagramOperator(out, a.arity)


def trace_close(a: DiagramOperator) -> RatPolyN:
    """Sum of weight * N^(loops) after joining in-point i to out-point i."""
    hist: Dict[RatPolyN, Dict[int, int]] = {}
    for p, w in a.terms.items():
        c = closure_cycles(p)
        h = hist.setdefault(w, {})
        h[c] = h.get(c, 0) + 1
    total = RatPolyN.const(0)
    for w, h in hist.items():
        poly = RatPolyN.poly([h.get(k, 0) for k in range(max(h) + 1)])
        total = total + w * poly
    return total


def unbroken_permutations(m: int = 5):
    return list(permutations(range(m)))
