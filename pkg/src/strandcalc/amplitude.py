"""Exact amplitudes of whole maps as rational functions of N.

Every internal edge carries a propagator operator (a weighted sum of
pairings); the amplitude is the sum over all per-edge choices of the product
of weights times N^(faces - 5V).  It is evaluated edge by edge: the state is
the matching among the slots of the half-edges still open, and its value is
a polynomial bookkeeping of face counts and weight classes.

When every propagator absorbs slot permutations on either side up to a
character (true for both projectors), the slots of an open half-edge can be
renamed freely, picking up the character; states are then stored in a
canonical slot order, which shrinks the sweep enormously.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .diagrams import (DiagramOperator, Pairing, closure_cycles, compose_operators,
                       perm_sign, permutation_pairing, trace_close)
from .exactpoly import RatPolyN
from .maps import VALENCE, FeynmanMap
from .projectors import VertexKernel, build_vertex
from .stranded import BudgetExceeded, StrandedGraph, _edge_order


# ---------------------------------------------------------------- operators

def slot_character(P: DiagramOperator) -> Optional[int]:
    """+1 or -1 if permuting the slots on either side of P multiplies it by
    that character of the permutation; None otherwise."""
    m = P.arity
    swap = permutation_pairing((1, 0) + tuple(range(2, m)))
    cycle = permutation_pairing(tuple(range(1, m)) + (0,))
    for chi in (1, -1):
        ok = True
        for g, s in ((swap, chi), (cycle, chi ** (m - 1))):
            G = DiagramOperator.single(g)
            if compose_operators(G, P) != P.scale(s) or compose_operators(P, G) != P.scale(s):
                ok = False
                break
        if ok:
            return chi
    return None


class _WeightBasis:
    """Writes every weight as a rational multiple of a few base functions."""

    def __init__(self):
        self.bases: List[RatPolyN] = []

    def split(self, w: RatPolyN) -> Tuple[int, Fraction]:
        for i, b in enumerate(self.bases):
            r = w / b
            if r.is_constant():
                c = r.constant_value()
                return i, (c.numerator if c.denominator == 1 else c)
        self.bases.append(w)
        return len(self.bases) - 1, 1


def _term_table(P: DiagramOperator, basis: _WeightBasis):
    out = []
    for p, w in sorted(P.terms.items()):
        conn = [0] * 10
        for x, y in p:
            conn[x - 1], conn[y - 1] = y - 1, x - 1
        cls, c = basis.split(w)
        out.append((tuple(conn), cls, c))
    return out


# ------------------------------------------------------------- contraction

class _Contraction:
    def __init__(self, m: FeynmanMap, ops: Dict[Tuple[int, int], DiagramOperator],
                 vertex: VertexKernel, order=None, max_states: Optional[int] = None,
                 leg_operator: Optional[DiagramOperator] = None,
                 min_power: Optional[int] = None):
        self.m = m
        self.min_power = min_power
        self.vertex = vertex
        self.order = list(order) if order is not None else _edge_order(m)
        if sorted(self.order) != sorted(m.edges()):
            raise ValueError("elimination order must list every internal edge once")
        self.max_states = max_states
        self.basis = _WeightBasis()
        distinct = {id(op): op for op in ops.values()}
        if leg_operator is not None:
            distinct[id(leg_operator)] = leg_operator
        chars = {slot_character(op) for op in distinct.values()}
        self.chi = chars.pop() if len(chars) == 1 else None
        self.tables = {k: _term_table(op, self.basis) for k, op in distinct.items()}
        self.edge_table = {e: self.tables[id(op)] for e, op in ops.items()}
        self._cache: Dict[tuple, tuple] = {}
        opened = set()
        self.opens = []
        for a, b in self.order:
            new = [w for w in dict.fromkeys((a // VALENCE, b // VALENCE)) if w not in opened]
            opened.update(new)
            self.opens.append(new)
        self.tail = [w for w in range(m.n_vertices) if w not in opened]
        self.orders = [b.leading_power() for b in self.basis.bases]
        # face budget of vertices not yet opened after each step: strands
        # that could close alone on a self-loop, and the others
        corners = [(p1, p2) for (p1, _), (p2, _) in vertex.corners.items() if p1 < p2]
        waiting = set(range(m.n_vertices))
        self.pending = []
        for new in self.opens:
            waiting -= set(new)
            single = sum(1 for w in waiting for p1, p2 in corners
                         if m.partner[VALENCE * w + p1] == VALENCE * w + p2)
            self.pending.append((single, 15 * len(waiting) - single))

    # endpoints are encoded as 5 * half-edge + slot

    def vertex_strands(self, w):
        out = []
        for (pos, k), (pos2, k2) in self.vertex.corners.items():
            if (pos, k) < (pos2, k2):
                out.append((5 * (VALENCE * w + pos) + k, 5 * (VALENCE * w + pos2) + k2))
        return out

    def canonical(self, strands):
        """Return (state, sign) with slots renamed in a fixed order, or
        (None, 0) when the state is annihilated by an odd character."""
        if self.chi is None:
            return tuple(sorted((x, y) if x < y else (y, x) for x, y in strands)), 1
        keyed = []
        for x, y in strands:
            if x > y:
                x, y = y, x
            hx, hy = x // 5, y // 5
            if hx == hy and self.chi == -1:
                return None, 0
            keyed.append((hx << 40) | (hy << 20) | (x << 10) | y)
        keyed.sort()
        fill: Dict[int, int] = {}
        odd = self.chi == -1
        perms: Dict[int, List[int]] = {}
        out = []
        for key in keyed:
            x, y = (key >> 10) & 1023, key & 1023
            hx, hy = x // 5, y // 5
            jx = fill.get(hx, 0)
            fill[hx] = jx + 1
            jy = fill.get(hy, 0)
            fill[hy] = jy + 1
            if odd:
                perms.setdefault(hx, [0] * 5)[x - 5 * hx] = jx
                perms.setdefault(hy, [0] * 5)[y - 5 * hy] = jy
            out.append((5 * hx + jx, 5 * hy + jy))
        sign = 1
        if odd:
            for p in perms.values():
                sign *= _parity(p)
        return tuple(out), sign

    def prepare(self, state, edge):
        a, b = edge
        kept = []
        other = [-1] * 10
        outer = [-1] * 10
        outer_ends = []
        for e1, e2 in state:
            h1, h2 = e1 // 5, e2 // 5
            in1, in2 = h1 == a or h1 == b, h2 == a or h2 == b
            if not in1 and not in2:
                kept.append((e1, e2))
                continue
            s1 = (e1 - 5 * a) if h1 == a else (e1 - 5 * b + 5)
            s2 = (e2 - 5 * a) if h2 == a else (e2 - 5 * b + 5)
            if in1 and in2:
                other[s1], other[s2] = s2, s1
            elif in1:
                outer[s1] = len(outer_ends)
                outer_ends.append(e2)
            else:
                outer[s2] = len(outer_ends)
                outer_ends.append(e1)
        return kept, tuple(other), tuple(outer), outer_ends

    def outcomes(self, table_key, table, other, outer):
        key = (table_key, other, outer)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        groups: Dict[tuple, Dict[int, Fraction]] = {}
        for conn, cls, c in table:
            joins, faces = _glue(other, outer, conn)
            g = groups.setdefault((joins, faces), {})
            g[cls] = g.get(cls, 0) + c
        out = []
        for (joins, faces), coeffs in groups.items():
            coeffs = {k: v for k, v in coeffs.items() if v}
            if coeffs:
                out.append((joins, faces, tuple(sorted(coeffs.items()))))
        out = tuple(out)
        self._cache[key] = out
        return out

    def run(self):
        """Sweep all edges; returns {final state: {(faces, class counts): coeff}}."""
        nb = len(self.basis.bases)
        zero = (0,) * nb
        layer = {(): {(0, zero): 1}}
        for step, edge in enumerate(self.order):
            table = self.edge_table[edge]
            tkey = id(table)
            nxt: Dict[tuple, Dict[tuple, Fraction]] = {}
            for state, val in layer.items():
                st = list(state)
                for w in self.opens[step]:
                    st.extend(self.vertex_strands(w))
                if self.opens[step]:
                    st, sgn = self.canonical(st)
                    if st is None:
                        continue
                    if sgn < 0:
                        val = {k: -c for k, c in val.items()}
                kept, other, outer, ends = self.prepare(st, edge)
                for joins, faces, coeffs in self.outcomes(tkey, table, other, outer):
                    ns, sgn = self.canonical(kept + [(ends[i], ends[j]) for i, j in joins])
                    if ns is None:
                        continue
                    acc = nxt.setdefault(ns, {})
                    for (f, counts), c in val.items():
                        for cls, w in coeffs:
                            cc = list(counts)
                            cc[cls] += 1
                            k = (f + faces, tuple(cc))
                            acc[k] = acc.get(k, 0) + sgn * c * w
                if self.max_states is not None and len(nxt) > self.max_states:
                    raise BudgetExceeded(
                        f"frontier exceeded {self.max_states} states at edge {step} "
                        f"with elimination order {self.order}")
            if self.min_power is not None:
                self._prune(nxt, step)
            layer = {s: {k: c for k, c in v.items() if c} for s, v in nxt.items()}
            layer = {s: v for s, v in layer.items() if v}
        if self.tail:
            done = {}
            for state, val in layer.items():
                st = list(state)
                for w in self.tail:
                    st.extend(self.vertex_strands(w))
                st, sgn = self.canonical(st)
                if st is not None:
                    done[st] = {k: sgn * c for k, c in val.items()}
            layer = done
        return layer

    def _prune(self, layer, step):
        """Drop terms that cannot reach N^min_power in the final large-N
        expansion, however many faces the remaining edges close."""
        need = self.min_power + 5 * self.m.n_vertices
        single0, rest0 = self.pending[step]
        partner = self.m.partner
        for state, val in layer.items():
            single, rest = single0, rest0
            for x, y in state:
                hx, hy = x // 5, y // 5
                if partner[hx] is None or partner[hy] is None:
                    continue
                if hx == hy or partner[hx] == hy:
                    single += 1
                else:
                    rest += 1
            room = single + rest // 2
            for k in [k for k in val
                      if k[0] + sum(n * o for n, o in zip(k[1], self.orders)) + room < need]:
                del val[k]

    def assemble(self, val) -> RatPolyN:
        by_counts: Dict[tuple, Dict[int, Fraction]] = {}
        for (f, counts), c in val.items():
            d = by_counts.setdefault(counts, {})
            d[f] = d.get(f, 0) + c
        total = RatPolyN.const(0)
        for counts, d in by_counts.items():
            poly = RatPolyN.poly([d.get(k, 0) for k in range(max(d) + 1)])
            for b, n in zip(self.basis.bases, counts):
                if n:
                    poly = poly * b ** n
            total = total + poly
        return total * RatPolyN.monomial(-5 * self.m.n_vertices)


_PARITY = {p: perm_sign(p) for p in itertools.permutations(range(5))}


def _parity(p):
    return _PARITY[tuple(p)]


def _glue(other, outer, conn):
    """Join the strands meeting one edge through the pairing ``conn``.

    Returns (pairs of outer-end indices now joined, closed faces)."""
    seen = [False] * 10
    joins = []
    for ep in range(10):
        if outer[ep] < 0 or seen[ep]:
            continue
        seen[ep] = True
        x = ep
        while True:
            y = conn[x]
            seen[y] = True
            if outer[y] >= 0:
                joins.append((outer[ep], outer[y]))
                break
            z = other[y]
            seen[z] = True
            x = z
    faces = 0
    for ep in range(10):
        if seen[ep]:
            continue
        faces += 1
        x = ep
        while not seen[x]:
            z = other[x]
            seen[x] = seen[z] = True
            x = conn[z]
    return tuple(joins), faces


def _resolve(P, vertex):
    if isinstance(vertex, str):
        vertex = build_vertex(vertex)
    return vertex or build_vertex("cyclic")


def contract_map(m: FeynmanMap, P: DiagramOperator, vertex=None, order=None,
                 max_states: Optional[int] = None,
                 edge_operators: Optional[Dict[Tuple[int, int], DiagramOperator]] = None,
                 min_power: Optional[int] = None) -> RatPolyN:
    """Sum over stranded configurations of (product of weights) N^(F - 5V).

    Vacuum maps only; for two-point maps use two_point_scalar.  ``order``
    overrides the elimination order; ``edge_operators`` replaces P on
    selected edges.  With ``min_power`` only the coefficients of N^p with
    p >= min_power in the large-N expansion of the result are exact; terms
    that cannot reach that power are discarded along the way."""
    vertex = _resolve(P, vertex)
    if m.kind != "vacuum":
        raise ValueError("contract_map takes vacuum maps; use two_point_scalar for two-point maps")
    if m.special == "ring":
        return trace_close(P)
    ops = {e: P for e in m.edges()}
    ops.update(edge_operators or {})
    c = _Contraction(m, ops, vertex, order, max_states, min_power=min_power)
    final = c.run()
    return c.assemble(final.get((), {}))


def contract_map_bruteforce(m: FeynmanMap, P: DiagramOperator, vertex=None) -> RatPolyN:
    """The same sum by listing every configuration; for small maps only."""
    vertex = _resolve(P, vertex)
    if m.special == "ring":
        return trace_close(P)
    edges = m.edges()
    terms = list(P.terms.items())
    total = RatPolyN.const(0)
    acc: Dict[Tuple[int, ...], Dict[int, int]] = {}
    for combo in itertools.product(range(len(terms)), repeat=len(edges)):
        cfg = {e: terms[i][0] for e, i in zip(edges, combo)}
        F = StrandedGraph(m, cfg, vertex).trace().F
        key = tuple(sorted(combo))
        d = acc.setdefault(key, {})
        d[F] = d.get(F, 0) + 1
    for key, d in acc.items():
        w = RatPolyN.const(1)
        for i in key:
            w = w * terms[i][1]
        total = total + w * RatPolyN.poly([d.get(k, 0) for k in range(max(d) + 1)])
    return total * RatPolyN.monomial(-5 * m.n_vertices)


def leading_power(m: FeynmanMap, P: DiagramOperator, vertex=None, floor: Optional[int] = None,
                  **kw) -> Optional[int]:
    """Largest power of N in the large-N expansion of contract_map.

    Returns None when the amplitude vanishes.  With ``floor`` the sweep
    drops everything below N^floor, and None then means the amplitude has
    no term at power floor or higher."""
    a = contract_map(m, P, vertex, min_power=floor, **kw)
    if a.is_zero():
        return None
    if floor is None:
        return a.leading_power()
    series = a.series_in_inverse_n(-floor)
    powers = [-k for k, c in series.items() if c and -k >= floor]
    return max(powers) if powers else None


# --------------------------------------------------------------- two-point

def close_legs(m: FeynmanMap) -> FeynmanMap:
    """Join the two legs of a two-point map into one internal edge."""
    x, y = m.externals
    partner = list(m.partner)
    partner[x], partner[y] = y, x
    return FeynmanMap(partner)


@lru_cache(maxsize=None)
def _sandwich(P_key, c: Pairing):
    P = _SANDWICH_OPS[P_key]
    return compose_operators(compose_operators(P, DiagramOperator.single(c)), P)


_SANDWICH_OPS: Dict[int, DiagramOperator] = {}


def open_amplitude(m: FeynmanMap, P: DiagramOperator, vertex=None, order=None,
                   max_states: Optional[int] = None) -> DiagramOperator:
    """The two-point amplitude as an operator from the first leg to the
    second, with a propagator P on each leg."""
    vertex = _resolve(P, vertex)
    if m.kind != "two_point":
        raise ValueError("open_amplitude takes two-point maps")
    if m.special == "bare_edge":
        return P
    x, y = m.externals
    ops = {e: P for e in m.edges()}
    c = _Contraction(m, ops, vertex, order, max_states, leg_operator=P)
    if c.chi is None:
        raise ValueError("open amplitudes need a propagator with a slot character")
    final = c.run()
    _SANDWICH_OPS[id(P)] = P
    total = DiagramOperator({}, P.arity)
    for state, val in final.items():
        amp = c.assemble(val)
        pairs = []
        for u, v in state:
            e1 = u - 5 * x + 1 if u // 5 == x else u - 5 * y + 6
            e2 = v - 5 * x + 1 if v // 5 == x else v - 5 * y + 6
            pairs.append((e1, e2))
        total = total + _sandwich(id(P), Pairing(pairs)).scale(amp)
    return total


def two_point_scalar(m: FeynmanMap, P: DiagramOperator, vertex=None, check: bool = True,
                     order=None, max_states: Optional[int] = None) -> RatPolyN:
    """The scalar f with amplitude(m) = f P.

    Computed by closing the two legs through P and dividing by trace(P).
    With ``check`` the full operator is also built and compared with f P."""
    vertex = _resolve(P, vertex)
    if m.kind != "two_point":
        raise ValueError("two_point_scalar takes two-point maps")
    tr = trace_close(P)
    if m.special == "bare_edge":
        return RatPolyN.const(1)
    f = contract_map(close_legs(m), P, vertex, max_states=max_states) / tr
    if check:
        T = open_amplitude(m, P, vertex, order, max_states)
        if T != P.scale(f):
            raise ArithmeticError("two-point amplitude is not proportional to the propagator")
    return f
