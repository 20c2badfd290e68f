"""Stranded configurations of Feynman maps: faces, degree, amplitudes, and
exact searches over configurations.

Strand segments are (half-edge, slot) incidences.  Each incidence meets one
corner of its vertex kernel and, when the half-edge is internal, one pairing
of its edge.  An internal edge (a, b) is oriented with a < b: a's slots are
the in side (endpoints 1..5) and b's slots the out side (6..10).
"""

from __future__ import annotations

import warnings
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .diagrams import Pairing, all_pairings, classify_pairing, closure_cycles, perm_sign
from .exactpoly import RatPolyN
from .maps import VALENCE, FeynmanMap
from .projectors import VertexKernel, build_vertex, symmetric_weight


class BudgetExceeded(RuntimeError):
    pass


# ------------------------------------------------------------------- tracing

@dataclass
class StrandedGraph:
    base: FeynmanMap
    edge_config: Dict[Tuple[int, int], Pairing]
    vertex: VertexKernel = field(default_factory=lambda: build_vertex("cyclic"))

    def __post_init__(self):
        if self.base.special:
            if self.base.special == "ring" and set(self.edge_config) != {(0, 0)}:
                raise ValueError("a ring graph carries one pairing, keyed (0, 0)")
            if self.base.special == "bare_edge" and set(self.edge_config) != {(0, 0)}:
                raise ValueError("a bare edge carries one pairing, keyed (0, 0)")
        elif set(self.edge_config) != set(self.base.edges()):
            raise ValueError("edge_config must cover exactly the internal edges")

    @classmethod
    def ring(cls, p: Pairing) -> "StrandedGraph":
        return cls(FeynmanMap.ring(), {(0, 0): p})

    @classmethod
    def bare_edge(cls, p: Pairing) -> "StrandedGraph":
        return cls(FeynmanMap.bare_edge(), {(0, 0): p})

    @property
    def classes(self) -> Counter:
        return Counter(classify_pairing(p).tag for p in self.edge_config.values())

    @property
    def B1(self) -> int:
        return self.classes["broken"]

    @property
    def B2(self) -> int:
        return self.classes["doubly_broken"]

    @property
    def U(self) -> int:
        return self.classes["unbroken"]

    def trace(self) -> "Trace":
        return trace_strands(self)

    def to_json(self) -> dict:
        return {"map": self.base.to_json(), "vertex": self.vertex.flavor,
                "edges": [{"edge": list(e), "pairing": p.to_json()}
                          for e, p in sorted(self.edge_config.items())]}

    @classmethod
    def from_json(cls, obj: dict, base: Optional[FeynmanMap] = None) -> "StrandedGraph":
        base = base or FeynmanMap.from_json(obj["map"])
        cfg = {tuple(e["edge"]): Pairing(e["pairing"]) for e in obj["edges"]}
        return cls(base, cfg, build_vertex(obj.get("vertex", "cyclic")))


@dataclass
class Trace:
    faces: List[int]                       # corner count of each closed face
    open_strands: List[Tuple[Tuple[int, int], Tuple[int, int], int]]
    # ((half-edge, slot) start, end, internal edges traversed)

    @property
    def F(self) -> int:
        return len(self.faces)

    @property
    def histogram(self) -> Dict[int, int]:
        return dict(sorted(Counter(self.faces).items()))


def _edge_endpoint(a, b, h, k):
    return k + 1 if h == a else 6 + k


def trace_strands(g: StrandedGraph) -> Trace:
    m = g.base
    if m.special == "ring":
        p = g.edge_config[(0, 0)]
        return Trace([0] * closure_cycles(p), [])
    if m.special == "bare_edge":
        # legs: in-side slots are leg 0, out-side slots leg 1
        p = g.edge_config[(0, 0)]
        out = []
        for x, y in p:
            ends = [(0 if e <= 5 else 1, (e - 1) % 5) for e in (x, y)]
            out.append((ends[0], ends[1], 1))
        return Trace([], out)
    corners = g.vertex.corners
    edge_of: Dict[int, Tuple[int, int]] = {}
    for e in g.edge_config:
        edge_of[e[0]] = e
        edge_of[e[1]] = e
    partner_maps = {e: p.partner_map() for e, p in g.edge_config.items()}

    def corner(h, k):
        v, pos = divmod(h, VALENCE)
        pos2, k2 = corners[(pos, k)]
        return VALENCE * v + pos2, k2

    def across(h, k):
        e = edge_of[h]
        a, b = e
        q = partner_maps[e][_edge_endpoint(a, b, h, k)]
        return (a, q - 1) if q <= 5 else (b, q - 6)

    seen = set()
    open_strands = []
    for h in m.externals:
        for k in range(5):
            if (h, k) in seen:
                continue
            seen.add((h, k))
            cur = corner(h, k)
            steps = 0
            while cur[0] not in set(m.externals):
                seen.add(cur)
                nxt = across(*cur)
                seen.add(nxt)
                steps += 1
                cur = corner(*nxt)
            seen.add(cur)
            open_strands.append(((h, k), cur, steps))
    faces = []
    for h in range(len(m.partner)):
        if m.partner[h] is None:
            continue
        for k in range(5):
            if (h, k) in seen:
                continue
            start = (h, k)
            cur = start
            n_corners = 0
            while True:
                seen.add(cur)
                nxt = corner(*cur)
                seen.add(nxt)
                n_corners += 1
                cur = across(*nxt)
                if cur == start:
                    break
            faces.append(n_corners)
    return Trace(faces, open_strands)


# -------------------------------------------------------------------- degree

def degree_from_census(F: int, V: int, B1: int, B2: int) -> int:
    return 5 + 5 * V + B1 + 2 * B2 - F


def degree_simplified(hist: Dict[int, int], B1: int, B2: int) -> Fraction:
    return 5 + B1 + 2 * B2 + sum(c * (Fraction(p, 3) - 1) for p, c in hist.items())


def faces_and_degree(g: StrandedGraph) -> dict:
    if g.base.kind != "vacuum":
        raise ValueError("faces_and_degree needs a vacuum graph; use internal_faces")
    t = g.trace()
    V = g.base.n_vertices
    hist = t.histogram
    if sum(p * c for p, c in hist.items()) != 15 * V:
        raise AssertionError("face lengths do not account for every corner")
    w1 = degree_from_census(t.F, V, g.B1, g.B2)
    w2 = degree_simplified(hist, g.B1, g.B2)
    if w1 != w2:
        raise AssertionError(f"degree formulas disagree: {w1} vs {w2}")
    return {"F": t.F, "F_p": hist, "B1": g.B1, "B2": g.B2, "U": g.U, "omega": w1}


def internal_faces(g: StrandedGraph) -> dict:
    t = g.trace()
    lengths = Counter(s for _, _, s in t.open_strands)
    if g.base.special == "bare_edge":
        lengths = Counter({0: 5})
    l_total = sum(i * c for i, c in lengths.items())
    E = g.base.n_edges
    internal_len = sum(t.faces)
    if internal_len != 5 * E - l_total and not g.base.special:
        raise AssertionError("internal face length identity violated")
    return {"F_internal": t.F, "F_p": t.histogram, "l_i": dict(sorted(lengths.items())),
            "l": l_total, "I": internal_len}


# ----------------------------------------------------------------- amplitude

def edge_weight(p: Pairing, rep: str) -> RatPolyN:
    c = classify_pairing(p)
    if rep == "A":
        if c.tag != "unbroken":
            return RatPolyN.const(0)
        return RatPolyN.const(perm_sign(c.perm)) / 120
    if rep == "S":
        return symmetric_weight(c.tag)
    raise ValueError(f"unknown representation {rep!r}")


def amplitude_coefficient_SA(g: StrandedGraph, rep: str) -> RatPolyN:
    """Exact amplitude of one vacuum stranded configuration for rep A or S.

    Closed form: eps * 2^B1 * 8^B2 / (120^E (1+6/N)^(B1+B2) (1+4/N)^B2)
    times N^-omega, checked against the product of edge weights times
    N^(F - 5V - 5)."""
    if g.base.kind != "vacuum":
        raise ValueError("amplitudes of single configurations are for vacuum graphs")
    if rep not in ("A", "S"):
        raise ValueError(f"unknown representation {rep!r}")
    d = faces_and_degree(g)
    B1, B2 = d["B1"], d["B2"]
    if rep == "A" and (B1 or B2):
        warnings.warn("broken edge in an antisymmetric configuration: amplitude is zero")
        return RatPolyN.const(0)
    N = RatPolyN.var()
    eps = (-1) ** B1
    if rep == "A":
        for p in g.edge_config.values():
            eps *= perm_sign(classify_pairing(p).perm)
    E = len(g.edge_config)
    closed = (RatPolyN.const(eps * 2 ** B1 * 8 ** B2)
              / (RatPolyN.const(120) ** E * (1 + 6 / N) ** (B1 + B2) * (1 + 4 / N) ** B2)
              * RatPolyN.monomial(-d["omega"]))
    direct = RatPolyN.monomial(d["F"] - 5 * g.base.n_vertices - 5)
    for p in g.edge_config.values():
        direct = direct * edge_weight(p, rep)
    if closed != direct:
        raise AssertionError("closed-form amplitude disagrees with edge-weight product")
    return closed


# ----------------------------------------------------------- face-count bounds

def check_face_count_bounds(F: int, hist: Dict[int, int], k: int, I: Optional[int] = None) -> bool:
    """F <= floor(I/(k+1) + sum_{i<=k} (k+1-i)/(k+1) F_i); I defaults to sum i F_i."""
    if k < 2:
        raise ValueError("the internal-face bound is stated for k >= 2")
    if I is None:
        I = sum(i * c for i, c in hist.items())
    rhs = Fraction(I, k + 1) + sum(Fraction(k + 1 - i, k + 1) * hist.get(i, 0)
                                   for i in range(1, k + 1))
    return F <= rhs.numerator // rhs.denominator


def check_open_strand_bounds(l_i: Dict[int, int], k: int, p: int = 2) -> bool:
    """5p <= floor(l/(k+1) + sum_{0<=i<=k} (k+1-i)/(k+1) l_i)."""
    if k < 1:
        raise ValueError("k >= 1")
    l = sum(i * c for i, c in l_i.items())
    rhs = Fraction(l, k + 1) + sum(Fraction(k + 1 - i, k + 1) * l_i.get(i, 0)
                                   for i in range(0, k + 1))
    return 5 * p <= rhs.numerator // rhs.denominator


# ----------------------------------------------------------- frontier search

UNIVERSES = ("all945", "unbroken_only")
PENALTY = {"unbroken": 0, "broken": 1, "doubly_broken": 2}


@lru_cache(maxsize=None)
def universe_pairings(universe: str) -> Tuple[Pairing, ...]:
    """Edge pairings in search order: unbroken, then broken, then doubly-broken."""
    ps = list(all_pairings(5))
    order = {"unbroken": 0, "broken": 1, "doubly_broken": 2}
    ps.sort(key=lambda p: (order[classify_pairing(p).tag], p))
    if universe == "unbroken_only":
        ps = [p for p in ps if classify_pairing(p).tag == "unbroken"]
    elif universe != "all945":
        raise ValueError(f"unknown edge universe {universe!r}")
    return tuple(ps)


@lru_cache(maxsize=None)
def _connection_tables(universe: str):
    out = []
    for p in universe_pairings(universe):
        conn = [0] * 10
        for x, y in p:
            conn[x - 1] = y - 1
            conn[y - 1] = x - 1
        out.append((tuple(conn), PENALTY[classify_pairing(p).tag], p))
    return tuple(out)


def _edge_order(m: FeynmanMap) -> List[Tuple[int, int]]:
    """Greedy order keeping few half-edges open.

    From every starting edge, repeatedly place the edge that leaves the
    fewest open half-edges (unplaced half-edges and legs of opened
    vertices); keep the run whose widest frontier, then total width, is
    smallest."""
    edges = m.edges()
    if not edges:
        return []

    def width_after(opened, placed_count, e):
        new = {e[0] // VALENCE, e[1] // VALENCE} - opened
        return VALENCE * (len(opened) + len(new)) - 2 * (placed_count + 1)

    best = None
    for first in edges:
        order, opened = [first], {first[0] // VALENCE, first[1] // VALENCE}
        widths = [VALENCE * len(opened) - 2]
        left = [e for e in edges if e != first]
        def unplaced(v):
            return sum(1 for x in left if x[0] // VALENCE == v) + \
                sum(1 for x in left if x[1] // VALENCE == v)

        while left:
            # ties go to the edge that brings a vertex closest to completion
            e = min(left, key=lambda e: (width_after(opened, len(order), e),
                                         min(unplaced(e[0] // VALENCE), unplaced(e[1] // VALENCE)),
                                         e))
            widths.append(width_after(opened, len(order), e))
            opened |= {e[0] // VALENCE, e[1] // VALENCE}
            order.append(e)
            left.remove(e)
        key = (max(widths), sum(widths), order)
        if best is None or key < best:
            best = key
    return best[2]


_OUTCOMES: Dict[tuple, Dict[tuple, tuple]] = {}


class FrontierSearch:
    """Edge-by-edge dynamic program over stranded configurations of a map.

    The state after placing some edges is the multiset of strands joining
    open half-edges (unplaced internal half-edges and external legs), with
    their corner counts when ``track_lengths`` is set.  Slot labels inside a
    half-edge are forgotten: both edge universes are closed under relabeling
    the slots of either end of an edge, so the best completion of a state
    only depends on this multiset."""

    def __init__(self, m: FeynmanMap, universe: str = "all945",
                 vertex: Optional[VertexKernel] = None, track_lengths: bool = False,
                 node_budget: Optional[int] = None, order=None):
        if m.special:
            raise ValueError("special maps have no frontier to search")
        self.m = m
        self.universe = universe
        self.tables = _connection_tables(universe)
        self.vertex = vertex or build_vertex("cyclic")
        self.track = bool(track_lengths)
        # lengths at or above the cap are stored as the cap itself
        self.cap = None if not track_lengths else \
            (track_lengths if track_lengths is not True else 1 << 30)
        self.order = list(order) if order is not None else _edge_order(m)
        self.externals = set(m.externals)
        self.budget = node_budget
        self.nodes = 0
        # edge outcomes depend only on the universe and the cap, so the
        # cache is shared by every search with the same pair
        self._outcome_cache = _OUTCOMES.setdefault((universe, self.cap), {})
        # vertices to open before placing each edge
        opened = set()
        self.opens: List[List[int]] = []
        for a, b in self.order:
            new = []
            for w in (a // VALENCE, b // VALENCE):
                if w not in opened:
                    opened.add(w)
                    new.append(w)
            self.opens.append(new)
        self.tail_opens = [w for w in range(m.n_vertices) if w not in opened]
        corners = self.vertex.corners
        self.vertex_strands: Dict[int, List[Tuple[int, int, int]]] = {}
        for w in range(m.n_vertices):
            st = []
            for (pos, k), (pos2, k2) in corners.items():
                if (pos, k) < (pos2, k2):
                    h1, h2 = VALENCE * w + pos, VALENCE * w + pos2
                    st.append((min(h1, h2), max(h1, h2), 1 if track_lengths else 0))
            self.vertex_strands[w] = st
        # strands of not-yet-opened vertices, split into those that can close
        # alone (joining the two ends of a self-loop) and the rest
        pending = []
        waiting = set(range(m.n_vertices))
        for new in self.opens:
            waiting -= set(new)
            single = sum(1 for w in waiting for a, b, _ in self.vertex_strands[w]
                         if m.partner[a] == b)
            pending.append((single, 15 * len(waiting) - single))
        self.pending = pending
        self.partner = m.partner

    # -- state handling
    @staticmethod
    def _norm(strands) -> tuple:
        # without length tracking every stored length is already 0
        return tuple(sorted(strands))

    def _with_vertices(self, state, ws):
        if not ws:
            return state
        st = list(state)
        for w in ws:
            st.extend(self.vertex_strands[w])
        return self._norm(st)

    def initial(self) -> tuple:
        return ()

    def prepare(self, state, edge):
        """Describe the ten slots of ``edge`` once per state.

        Returns (kept strands, partner slot or -1, outer half-edge, length) where
        each slot's strand either ends on another slot of the edge or on an
        outer half-edge."""
        a, b = edge
        kept = []
        other = [-1] * 10
        outer = [-1] * 10
        length = [0] * 10
        fill = {a: 0, b: 0}
        for h1, h2, L in state:
            in1 = h1 == a or h1 == b
            in2 = h2 == a or h2 == b
            if not in1 and not in2:
                kept.append((h1, h2, L))
                continue
            e1 = e2 = -1
            if in1:
                e1 = fill[h1] + (0 if h1 == a else 5)
                fill[h1] += 1
            if in2:
                e2 = fill[h2] + (0 if h2 == a else 5)
                fill[h2] += 1
            if in1 and in2:
                other[e1], other[e2] = e2, e1
                length[e1] = length[e2] = L
            elif in1:
                outer[e1], length[e1] = h2, L
            else:
                outer[e2], length[e2] = h1, L
        return tuple(kept), tuple(other), tuple(outer), tuple(length)

    def glue_prepared(self, prep, conn):
        new, faces = self._edge_outcome(prep[1], prep[2], prep[3], conn, self.cap)
        return self._norm(prep[0] + new), list(faces)

    @staticmethod
    def _edge_outcome(other, outer, length, conn, cap=None):
        """Strands and faces produced by pairing ``conn`` on a prepared edge."""
        new = []
        seen = [False] * 10
        for ep in range(10):
            if outer[ep] < 0 or seen[ep]:
                continue
            seen[ep] = True
            L = length[ep]
            x = ep
            while True:
                y = conn[x]
                seen[y] = True
                if outer[y] >= 0:
                    L += length[y]
                    if cap is not None and L > cap:
                        L = cap
                    h1, h2 = outer[ep], outer[y]
                    new.append((h1, h2, L) if h1 <= h2 else (h2, h1, L))
                    break
                z = other[y]
                seen[z] = True
                L += length[y]
                x = z
        faces = []
        for ep in range(10):
            if seen[ep]:
                continue
            L = 0
            x = ep
            while not seen[x]:
                z = other[x]
                seen[x] = seen[z] = True
                L += length[x]
                x = conn[z]
            faces.append(L if cap is None or L <= cap else cap)
        return tuple(new), tuple(sorted(faces))

    def outcomes(self, prep):
        """Distinct results of all pairings on a prepared edge.

        Many pairings act identically on a given slot structure; each group is
        listed once as (new strands, face lengths, penalty, first table index,
        multiplicity), in table order of first appearance."""
        key = prep[1:]
        hit = self._outcome_cache.get(key)
        if hit is not None:
            return hit
        groups = {}
        for i, (conn, pen, _) in enumerate(self.tables):
            new, faces = self._edge_outcome(*key, conn, self.cap)
            g = groups.get((new, faces, pen))
            if g is None:
                groups[(new, faces, pen)] = [i, 1]
            else:
                g[1] += 1
        out = tuple((new, faces, pen, i, n) for (new, faces, pen), (i, n) in groups.items())
        self._outcome_cache[key] = out
        return out

    def glue(self, state, edge, conn):
        """Place one pairing on ``edge``; return (new state, closed face lengths)."""
        return self.glue_prepared(self.prepare(state, edge), conn)

    def _upper(self, state, step) -> int:
        """Faces still to come.  A face built from one strand needs that strand
        to join the two ends of a single edge; every other face uses two or
        more strands."""
        single, rest = self.pending[step - 1] if step > 0 else (0, 15 * self.m.n_vertices)
        ext, partner = self.externals, self.partner
        for a, b, _ in state:
            if a in ext or b in ext:
                continue
            if a == b or partner[a] == b:
                single += 1
            else:
                rest += 1
        return single + rest // 2

    def _tick(self):
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExceeded(f"frontier search exceeded {self.budget} nodes")

    # -- maximization
    def maximize(self, accept: Callable[[tuple], bool], penalize: bool = False):
        """Exact max of (faces - penalties) over configurations whose final
        strand multiset passes ``accept``.  Returns (value, witness) or
        (None, None) when nothing is accepted."""
        # memo entries are (value, exact); an inexact entry is an upper bound
        # recorded when the subtree could not beat the caller's floor
        memo: Dict[Tuple[int, tuple], Tuple[float, bool]] = {}
        NEG = float("-inf")
        E = len(self.order)

        def gain_of(faces, pen):
            return len(faces) - (pen if penalize else 0)

        def best(step, state, floor=NEG):
            key = (step, state)
            hit = memo.get(key)
            if hit is not None and (hit[1] or hit[0] <= floor):
                return hit[0]
            self._tick()
            if step == E:
                final = self._with_vertices(state, self.tail_opens)
                val = 0 if accept(final) else NEG
                memo[key] = (val, True)
                return val
            state = self._with_vertices(state, self.opens[step])
            prep = self.prepare(state, self.order[step])
            kept = prep[0]
            top = NEG
            outs = sorted(self.outcomes(prep), key=lambda o: -gain_of(o[1], o[2]))
            for new, faces, pen, _, _ in outs:
                nxt = self._norm(kept + new)
                gain = gain_of(faces, pen)
                bar = max(floor, top)
                if bar != NEG and gain + self._upper(nxt, step + 1) <= bar:
                    continue
                v = best(step + 1, nxt, bar - gain)
                if v != NEG and gain + v > top:
                    top = gain + v
            if top > floor or floor == NEG:
                memo[key] = (top, True)
                return top
            memo[key] = (floor, False)
            return floor

        value = best(0, self.initial())
        if value == NEG:
            return None, None
        # replay to recover the first optimal configuration in table order;
        # strands carry real slots here so the chosen pairings can be mapped
        # back from representative slots to the map's own slots
        state = self.initial()
        real: List[tuple] = []
        target = value
        cfg = {}
        for step in range(E):
            opened = self._with_vertices(state, self.opens[step])
            real = real + [st for w in self.opens[step] for st in self._real_vertex_strands(w)]
            edge = self.order[step]
            prep = self.prepare(opened, edge)
            choice = None
            for new, faces, pen, idx, _ in self.outcomes(prep):
                nxt = self._norm(prep[0] + new)
                gain = gain_of(faces, pen)
                if gain + best(step + 1, nxt) == target and (choice is None or idx < choice[0]):
                    choice = (idx, gain, nxt)
            if choice is None:
                raise AssertionError("witness replay failed")
            idx, gain, nxt = choice
            actual = self._to_real(real, edge, self.tables[idx][2])
            cfg[edge] = actual
            real = _glue_real(real, edge, actual)
            target -= gain
            state = nxt
        return value, cfg

    def forward(self, combine, start, advance):
        """Layered sweep over all configurations.

        Each reachable state carries a value; ``advance(value, faces, pen,
        multiplicity)`` moves it across one edge outcome and ``combine(old,
        new)`` merges two values arriving at the same state.  Returns the
        final layer keyed by the strand multiset among external legs."""
        layer = {self.initial(): start}
        for step, edge in enumerate(self.order):
            nxt: Dict[tuple, object] = {}
            for state, val in layer.items():
                self._tick()
                opened = self._with_vertices(state, self.opens[step])
                prep = self.prepare(opened, edge)
                for new, faces, pen, _, mult in self.outcomes(prep):
                    ns = self._norm(prep[0] + new)
                    v = advance(val, faces, pen, mult)
                    nxt[ns] = combine(nxt[ns], v) if ns in nxt else v
            layer = nxt
        return {self._with_vertices(st, self.tail_opens): v for st, v in layer.items()}

    def _real_vertex_strands(self, w):
        out = []
        for (pos, k), (pos2, k2) in self.vertex.corners.items():
            if (pos, k) < (pos2, k2):
                out.append(((VALENCE * w + pos, k), (VALENCE * w + pos2, k2), 1))
        return out

    def _sort_key(self, st):
        (h1, _), (h2, _), L = st
        return (min(h1, h2), max(h1, h2), L if self.track else 0)

    def _to_real(self, real, edge, rep: Pairing) -> Pairing:
        """Translate a pairing written on representative slots to real slots."""
        a, b = edge
        oriented = []
        for st in real:
            e1, e2, L = st
            if e1[0] > e2[0]:
                e1, e2 = e2, e1
            oriented.append((e1, e2, L))
        oriented.sort(key=self._sort_key)
        fill = {a: 0, b: 0}
        rep_of_real = {}
        for e1, e2, _ in oriented:
            for h, k in (e1, e2):
                if h == a or h == b:
                    rep_ep = fill[h] + (1 if h == a else 6)
                    fill[h] += 1
                    rep_of_real[(1 if h == a else 6) + k] = rep_ep
        real_of_rep = {v: k for k, v in rep_of_real.items()}
        return Pairing((real_of_rep[x], real_of_rep[y]) for x, y in rep)


def _glue_real(strands, edge, p: Pairing):
    """Glue strands with explicit slots through pairing ``p`` on ``edge``."""
    a, b = edge
    pm = p.partner_map()
    at = {}
    for i, (e1, e2, _) in enumerate(strands):
        for j, (h, k) in enumerate((e1, e2)):
            if h == a or h == b:
                at[(1 if h == a else 6) + k] = (i, j)
    used = [False] * len(strands)
    out = []
    for i, st in enumerate(strands):
        if used[i]:
            continue
        for j in (0, 1):
            h_out = st[j]
            if h_out[0] == a or h_out[0] == b:
                continue
            used[i] = True
            L = st[2]
            ci, cj = i, 1 - j
            while True:
                h, k = strands[ci][cj]
                if h != a and h != b:
                    break
                ni, nj = at[pm[(1 if h == a else 6) + k]]
                used[ni] = True
                L += strands[ni][2]
                ci, cj = ni, 1 - nj
            out.append((h_out, strands[ci][cj], L))
            break
    return out


def _class_accept(external_class: str, legs: Sequence[int]):
    if external_class == "any":
        return lambda final: True
    if len(legs) != 2:
        raise ValueError("edge classes apply to two-point fragments")
    x, y = sorted(legs)
    want = {"unbroken": (5, 0, 0), "broken": (3, 1, 1), "doubly_broken": (1, 2, 2)}
    if external_class not in want:
        raise ValueError(f"unknown external class {external_class!r}")
    target = want[external_class]

    def accept(final):
        xy = sum(1 for a, b, _ in final if (a, b) == (x, y))
        xx = sum(1 for a, b, _ in final if a == b == x)
        yy = sum(1 for a, b, _ in final if a == b == y)
        return (xy, xx, yy) == target

    return accept


@dataclass
class MaxFacesResult:
    max_faces: Optional[int]
    witness: Optional[Dict[Tuple[int, int], Pairing]]
    lower_bound_only: bool = False
    nodes: int = 0


def max_faces_search(fragment: FeynmanMap, external_class: str = "any",
                     edge_universe: str = "all945", node_budget: Optional[int] = None,
                     vertex: Optional[VertexKernel] = None) -> MaxFacesResult:
    """Exact maximum number of internal faces over edge configurations."""
    search = FrontierSearch(fragment, edge_universe, vertex, node_budget=node_budget)
    accept = _class_accept(external_class, fragment.externals) if fragment.externals \
        else (lambda final: True)
    try:
        value, cfg = search.maximize(accept)
    except BudgetExceeded:
        lb, cfg = _greedy_lower_bound(fragment, accept, edge_universe, vertex)
        return MaxFacesResult(lb, cfg, True, search.nodes)
    return MaxFacesResult(None if value is None else int(value), cfg, False, search.nodes)


def _greedy_lower_bound(m, accept, universe, vertex):
    """Best configuration found by a capped search, used when the exact one
    runs out of budget.  Reported as a lower bound only."""
    import random
    rng = random.Random(0)
    pairings = universe_pairings(universe)
    best, best_cfg = None, None
    edges = m.edges()
    for _ in range(2000):
        cfg = {e: rng.choice(pairings) for e in edges}
        g = StrandedGraph(m, cfg, vertex or build_vertex("cyclic"))
        t = g.trace()
        final = tuple(sorted((min(a[0], b[0]), max(a[0], b[0]), 0) for a, b, _ in t.open_strands))
        if accept(final) and (best is None or t.F > best):
            best, best_cfg = t.F, cfg
    return best, best_cfg


def min_degree_vacuum(m: FeynmanMap, edge_universe: str = "all945",
                      node_budget: Optional[int] = None) -> int:
    """Smallest degree over all stranded configurations of a vacuum map."""
    if m.special == "ring":
        return min(5 + PENALTY[classify_pairing(p).tag] - closure_cycles(p)
                   for p in universe_pairings(edge_universe))
    s = FrontierSearch(m, edge_universe, node_budget=node_budget)
    value, _ = s.maximize(lambda final: True, penalize=True)
    return 5 + 5 * m.n_vertices - int(value)


def configuration_census(m: FeynmanMap, edge_universe: str = "all945",
                         length_cap: Optional[int] = None,
                         node_budget: Optional[int] = None,
                         vertex: Optional[VertexKernel] = None) -> Counter:
    """Count every stranded configuration of a vacuum map by outcome.

    Keys are (sorted face lengths, B1 + 2*B2); values are numbers of
    configurations.  The counts add up to |universe|^E.  With ``length_cap``
    every face of that length or longer is recorded with length equal to
    the cap, which keeps the sweep small."""
    if m.kind != "vacuum":
        raise ValueError("the census is taken over vacuum maps")
    if m.special == "ring":
        out = Counter()
        for p in universe_pairings(edge_universe):
            faces = [0] * closure_cycles(p)  # ring faces pass no corner
            out[(tuple(faces), PENALTY[classify_pairing(p).tag])] += 1
        return out
    s = FrontierSearch(m, edge_universe, vertex, track_lengths=length_cap or True,
                       node_budget=node_budget)

    def advance(val, faces, pen, mult):
        out = {}
        for (fs, p), c in val.items():
            k = (tuple(sorted(fs + faces)) if faces else fs, p + pen)
            out[k] = out.get(k, 0) + c * mult
        return out

    def merge(into, more):
        # ``into`` is always a fresh dict from advance, so it can be updated
        for k, c in more.items():
            into[k] = into.get(k, 0) + c
        return into

    final = s.forward(merge, {((), 0): 1}, advance)
    return Counter(final[()])


def census_degrees(census: Counter, n_vertices: int) -> Counter:
    """Degree distribution of a census."""
    out = Counter()
    for (faces, pen), c in census.items():
        out[5 + 5 * n_vertices + pen - len(faces)] += c
    return out


def degree_census(m: FeynmanMap, edge_universe: str = "all945",
                  node_budget: Optional[int] = None,
                  vertex: Optional[VertexKernel] = None) -> Counter:
    """Count configurations of a vacuum map by (F, B1, B2), without face
    lengths.  Much cheaper than configuration_census."""
    if m.kind != "vacuum":
        raise ValueError("the census is taken over vacuum maps")
    if m.special == "ring":
        out = Counter()
        for p in universe_pairings(edge_universe):
            tag = classify_pairing(p).tag
            out[(closure_cycles(p), int(tag == "broken"), int(tag == "doubly_broken"))] += 1
        return out
    s = FrontierSearch(m, edge_universe, vertex, node_budget=node_budget)
    step = {0: (0, 0), 1: (1, 0), 2: (0, 1)}

    def advance(val, faces, pen, mult):
        d1, d2 = step[pen]
        n = len(faces)
        return {(f + n, b1 + d1, b2 + d2): c * mult for (f, b1, b2), c in val.items()}

    def merge(into, more):
        for k, c in more.items():
            into[k] = into.get(k, 0) + c
        return into

    final = s.forward(merge, {(0, 0, 0): 1}, advance)
    return Counter(final[()])


def check_census_bounds(census: Counter, n_vertices: int, k: int = 2) -> dict:
    """Check the internal-face bound at level k and the implication
    F1 = F2 = 0 => omega >= 0 on every census entry.

    The census must record lengths up to at least k (``length_cap >= k + 1``
    keeps F_1..F_k exact).  Vacuum faces use all 15V corners, so I = 15V."""
    I = 15 * n_vertices
    checked = bound_fail = short_free = short_free_negative = 0
    for (faces, pen), c in census.items():
        hist = Counter(faces)
        F = len(faces)
        checked += c
        if not check_face_count_bounds(F, hist, k, I):
            bound_fail += c
        if hist[1] == 0 and hist[2] == 0:
            short_free += c
            if 5 + 5 * n_vertices + pen - F < 0:
                short_free_negative += c
    return {"configurations": checked, "bound_violations": bound_fail,
            "short_face_free": short_free, "short_face_free_negative": short_free_negative}
