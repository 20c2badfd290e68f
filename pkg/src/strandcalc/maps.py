"""Rooted 6-valent combinatorial maps (Feynman maps).

Half-edge ``6*v + i`` sits at cyclic position i of vertex v.  A map is the
fixed-point-free part of an involution on those ids; unpaired half-edges are
external legs.  Two maps with no vertices are special: the ring (one edge
closed on itself) and the bare edge (a two-point map with no vertex).

Enumeration grows maps in breadth-first canonical order from the root: the
smallest unmatched half-edge is paired with a later free half-edge, with
position 0 of a fresh vertex, or (two-point maps only) becomes the outgoing
leg.  This yields every rooted map exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

VALENCE = 6


class FeynmanMap:
    __slots__ = ("partner", "externals", "root", "special", "_code")

    def __init__(self, partner: Sequence[Optional[int]], externals: Sequence[int] = (),
                 root: Optional[int] = None, special: Optional[str] = None):
        self.partner = tuple(partner)
        self.externals = tuple(externals)
        self.root = root
        self.special = special
        self._code = None
        self._check()

    # -- construction helpers
    @classmethod
    def ring(cls) -> "FeynmanMap":
        return cls((), (), None, "ring")

    @classmethod
    def bare_edge(cls) -> "FeynmanMap":
        return cls((), (), None, "bare_edge")

    @classmethod
    def build(cls, n_vertices: int, edges, externals=(), root=None) -> "FeynmanMap":
        """Build from ((v, i), (w, j)) edge pairs and (v, i) external legs."""
        partner: List[Optional[int]] = [None] * (VALENCE * n_vertices)
        for (v, i), (w, j) in edges:
            a, b = VALENCE * v + i, VALENCE * w + j
            if partner[a] is not None or partner[b] is not None or a == b:
                raise ValueError(f"half-edge reused in edge {(v, i)}-{(w, j)}")
            partner[a], partner[b] = b, a
        ext = [VALENCE * v + i for v, i in externals]
        if root is not None and not isinstance(root, int):
            root = VALENCE * root[0] + root[1]
        return cls(partner, ext, root)

    def _check(self):
        if self.special:
            if self.partner or self.externals:
                raise ValueError("special maps carry no half-edges")
            return
        if len(self.partner) % VALENCE:
            raise ValueError("half-edge count is not a multiple of 6")
        free = []
        for h, p in enumerate(self.partner):
            if p is None:
                free.append(h)
            elif self.partner[p] != h or p == h:
                raise ValueError(f"not an involution at half-edge {h}")
        if sorted(free) != sorted(self.externals):
            raise ValueError("externals must be exactly the unpaired half-edges")
        if not self.is_connected():
            raise ValueError("map is not connected")

    # -- basic data
    @property
    def n_vertices(self) -> int:
        return len(self.partner) // VALENCE

    V = n_vertices

    @property
    def n_edges(self) -> int:
        if self.special == "ring":
            return 1
        if self.special == "bare_edge":
            return 0
        return sum(1 for p in self.partner if p is not None) // 2

    E = n_edges

    @property
    def kind(self) -> str:
        if self.special == "ring" or (not self.special and not self.externals):
            return "vacuum"
        if self.special == "bare_edge" or len(self.externals) == 2:
            return "two_point"
        return f"{len(self.externals)}_point"

    @property
    def vertices(self) -> List[Tuple[int, ...]]:
        return [tuple(range(VALENCE * v, VALENCE * v + VALENCE))
                for v in range(self.n_vertices)]

    def edges(self) -> List[Tuple[int, int]]:
        """Internal edges as (lower id, higher id), sorted."""
        return [(h, p) for h, p in enumerate(self.partner) if p is not None and h < p]

    def edge_vertices(self) -> List[Tuple[int, int]]:
        return [(a // VALENCE, b // VALENCE) for a, b in self.edges()]

    def is_connected(self) -> bool:
        n = self.n_vertices
        if n <= 1:
            return True
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for i in range(VALENCE):
                p = self.partner[VALENCE * v + i]
                if p is not None and p // VALENCE not in seen:
                    seen.add(p // VALENCE)
                    stack.append(p // VALENCE)
        return len(seen) == n

    def __eq__(self, other):
        return (isinstance(other, FeynmanMap) and self.partner == other.partner
                and self.externals == other.externals and self.special == other.special)

    def __hash__(self):
        return hash((self.partner, self.externals, self.special))

    def __repr__(self):
        if self.special:
            return f"FeynmanMap.{self.special}()"
        return f"FeynmanMap(V={self.n_vertices}, edges={self.edges()}, externals={self.externals})"

    # -- canonical forms
    def rooted_code(self, root: Optional[int] = None) -> Tuple[int, ...]:
        """Breadth-first relabeling from ``root``; returns the partner table.

        External legs are coded -1 (in) and -2, -3, ... in their listed order."""
        if self.special:
            return (self.special,)
        if root is None:
            root = self.root if self.root is not None else (
                self.externals[0] if self.externals else 0)
        new_index: Dict[int, int] = {}
        rotation: Dict[int, int] = {}
        order: List[int] = []

        def discover(h):
            v = h // VALENCE
            new_index[v] = len(order)
            rotation[v] = h % VALENCE
            order.append(v)

        def new_id(h):
            v = h // VALENCE
            return VALENCE * new_index[v] + (h % VALENCE - rotation[v]) % VALENCE

        discover(root)
        ext_code = {h: -(k + 1) for k, h in enumerate(self.externals)}
        code = []
        n = 0
        while n < len(self.partner):
            v = order[n // VALENCE]
            h = VALENCE * v + (n % VALENCE + rotation[v]) % VALENCE
            p = self.partner[h]
            if p is None:
                code.append(ext_code[h])
            else:
                if p // VALENCE not in new_index:
                    discover(p)
                code.append(new_id(p))
            n += 1
        return tuple(code)

    def canonical(self, root: Optional[int] = None) -> "FeynmanMap":
        """The relabeled copy whose half-edge ids follow the rooted code."""
        if self.special:
            return self
        code = self.rooted_code(root)
        partner = [c if c >= 0 else None for c in code]
        ext_pos = sorted((-c, i) for i, c in enumerate(code) if c < 0)
        return FeynmanMap(partner, [i for _, i in ext_pos], 0)

    def unrooted_code(self) -> Tuple[int, ...]:
        if self._code is None:
            if self.special or self.externals:
                self._code = self.rooted_code()
            else:
                self._code = min(self.rooted_code(r) for r in range(len(self.partner)))
        return self._code

    def root_orbit_size(self) -> int:
        """Number of distinct rooted maps obtained by moving the root."""
        if self.special or self.externals:
            return 1
        return len({self.rooted_code(r) for r in range(len(self.partner))})

    # -- serialization
    def to_json(self) -> dict:
        if self.special:
            return {"special": self.special}
        return {"vertices": [list(v) for v in self.vertices],
                "involution": [list(e) for e in self.edges()],
                "externals": list(self.externals),
                "root": self.root}

    @classmethod
    def from_json(cls, obj: dict) -> "FeynmanMap":
        if obj.get("special"):
            return cls((), (), None, obj["special"])
        n = sum(len(v) for v in obj["vertices"])
        flat = [h for v in obj["vertices"] for h in v]
        if flat != list(range(n)):
            raise ValueError("vertices must list half-edges 0..6V-1 in order")
        partner: List[Optional[int]] = [None] * n
        for a, b in obj["involution"]:
            partner[a], partner[b] = b, a
        return cls(partner, obj.get("externals", []), obj.get("root"))


# ----------------------------------------------------------------- enumeration

@dataclass
class MapEnumeration:
    maps: List[FeynmanMap]
    truncated: bool = False
    multiplicities: Optional[List[int]] = None
    limit: Optional[int] = None

    def __iter__(self):
        return iter(self.maps)

    def __len__(self):
        return len(self.maps)

    def __getitem__(self, i):
        return self.maps[i]


def _grow(n_vertices: int, two_point: bool) -> Iterator[FeynmanMap]:
    total = VALENCE * n_vertices
    partner: List[Optional[int]] = [None] * total
    state = {"verts": 1, "out": None}
    if two_point:
        partner[0] = -1  # incoming leg sits at the root

    def smallest_open():
        limit_h = VALENCE * state["verts"]
        for h in range(limit_h):
            if partner[h] is None:
                return h
        return None

    def rec():
        h = smallest_open()
        if h is None:
            if state["verts"] == n_vertices and (not two_point or state["out"] is not None):
                p = [None if x is not None and x < 0 else x for x in partner]
                ext = [0, state["out"]] if two_point else []
                yield FeynmanMap(p, ext, 0)
            return
        # pair with a later open half-edge among discovered vertices
        for k in range(h + 1, VALENCE * state["verts"]):
            if partner[k] is None:
                partner[h], partner[k] = k, h
                yield from rec()
                partner[h] = partner[k] = None
        # pair with a fresh vertex
        if state["verts"] < n_vertices:
            k = VALENCE * state["verts"]
            state["verts"] += 1
            partner[h], partner[k] = k, h
            yield from rec()
            partner[h] = partner[k] = None
            state["verts"] -= 1
        # outgoing leg
        if two_point and state["out"] is None:
            state["out"] = h
            partner[h] = -2
            yield from rec()
            partner[h] = None
            state["out"] = None

    if n_vertices < 1:
        raise ValueError("enumeration starts at one vertex; use FeynmanMap.ring()")
    yield from rec()


def has_melon_or_double_tadpole(m: FeynmanMap) -> bool:
    if m.special:
        return False
    loops: Dict[int, int] = {}
    par: Dict[Tuple[int, int], int] = {}
    for u, v in m.edge_vertices():
        if u == v:
            loops[u] = loops.get(u, 0) + 1
        else:
            key = (min(u, v), max(u, v))
            par[key] = par.get(key, 0) + 1
    return any(c >= 2 for c in loops.values()) or any(c >= 5 for c in par.values())


def enumerate_maps(n_vertices: int, kind: str = "vacuum", rooted: bool = True,
                   filter: Optional[str] = None, limit: Optional[int] = None) -> MapEnumeration:
    """Enumerate connected maps with ``n_vertices`` 6-valent vertices.

    ``kind`` is "vacuum" or "two_point".  With ``rooted=False`` (vacuum only)
    one representative per isomorphism class is kept, together with the
    number of rooted maps in its class.  ``limit`` caps the number of rooted
    maps generated; hitting it sets ``truncated``."""
    if kind not in ("vacuum", "two_point"):
        raise ValueError(f"unknown map kind {kind!r}")
    if filter not in (None, "no_melon_no_double_tadpole"):
        raise ValueError(f"unknown filter {filter!r}")
    out: List[FeynmanMap] = []
    truncated = False
    count = 0
    for m in _grow(n_vertices, kind == "two_point"):
        count += 1
        if limit is not None and count > limit:
            truncated = True
            break
        if filter and has_melon_or_double_tadpole(m):
            continue
        out.append(m)
    if rooted or kind == "two_point":
        return MapEnumeration(out, truncated, None, limit)
    classes: Dict[Tuple[int, ...], int] = {}
    reps: Dict[Tuple[int, ...], FeynmanMap] = {}
    for m in out:
        c = m.unrooted_code()
        if c not in classes:
            classes[c] = 0
            reps[c] = _from_code(c)
        classes[c] += 1
    keys = sorted(classes)
    return MapEnumeration([reps[k] for k in keys], truncated, [classes[k] for k in keys], limit)


def _from_code(code) -> FeynmanMap:
    return FeynmanMap([c if c >= 0 else None for c in code], [], 0)


def is_melon_map(m: FeynmanMap) -> bool:
    """Two-point map made of two vertices joined by five edges."""
    if m.special or m.n_vertices != 2 or len(m.externals) != 2:
        return False
    ev = m.edge_vertices()
    return len(ev) == 5 and all(u != v for u, v in ev)


def is_double_tadpole_map(m: FeynmanMap) -> bool:
    return (not m.special and m.n_vertices == 1 and len(m.externals) == 2)


# ------------------------------------------------------------- sub-map shapes

@dataclass
class PatternReport:
    melons: List[dict] = field(default_factory=list)
    double_tadpoles: List[dict] = field(default_factory=list)
    tadpoles: List[dict] = field(default_factory=list)
    dipoles: List[dict] = field(default_factory=list)
    dipole_tadpoles: List[dict] = field(default_factory=list)
    quartic_rungs: List[dict] = field(default_factory=list)

    def counts(self) -> Dict[str, int]:
        return {k: len(getattr(self, k)) for k in
                ("melons", "double_tadpoles", "tadpoles", "dipoles",
                 "dipole_tadpoles", "quartic_rungs")}


class _Graph:
    """Vertex-level view of a map used by the pattern detector."""

    def __init__(self, m: FeynmanMap):
        self.m = m
        self.n = m.n_vertices
        self.edges = m.edges()
        self.loops: Dict[int, List[Tuple[int, int]]] = {v: [] for v in range(self.n)}
        self.between: Dict[Tuple[int, int], List[Tuple[int, int]]] = {}
        self.adj: Dict[int, List[Tuple[int, Tuple[int, int]]]] = {v: [] for v in range(self.n)}
        for e in self.edges:
            u, v = e[0] // VALENCE, e[1] // VALENCE
            if u == v:
                self.loops[u].append(e)
            else:
                self.between.setdefault((min(u, v), max(u, v)), []).append(e)
            self.adj[u].append((v, e))
            self.adj[v].append((u, e))
        self.root_edge = None
        if m.root is not None and m.partner and m.partner[m.root] is not None:
            r = m.root
            self.root_edge = (min(r, m.partner[r]), max(r, m.partner[r]))

    def parallel(self, u, v):
        return self.between.get((min(u, v), max(u, v)), [])

    def dressings(self, removed):
        """Components of the graph minus ``removed`` that hang off it by exactly
        two edges.  Returns a list of (endpoints, boundary edges)."""
        removed = set(removed)
        seen = set()
        out = []
        for s in range(self.n):
            if s in removed or s in seen:
                continue
            comp = {s}
            stack = [s]
            boundary = []
            internal_root = False
            while stack:
                x = stack.pop()
                for y, e in self.adj[x]:
                    if y in removed:
                        boundary.append((y, e))
                    elif y not in comp:
                        comp.add(y)
                        stack.append(y)
            seen |= comp
            legs = sum(1 for v in comp for h in range(VALENCE * v, VALENCE * v + VALENCE)
                       if self.m.partner[h] is None)
            if self.root_edge is not None:
                a, b = self.root_edge
                internal_root = (a // VALENCE in comp or b // VALENCE in comp)
            if len(boundary) == 2 and legs == 0 and not internal_root:
                out.append((tuple(sorted(y for y, _ in boundary)), tuple(e for _, e in boundary)))
        return out

    def dressed_loops(self, v, removed=None, exclude=()):
        """Dressed self-connections of v: actual loops plus hanging components."""
        removed = {v} if removed is None else set(removed)
        res = [("edge", e) for e in self.loops[v] if e not in exclude]
        for ends, bnd in self.dressings(removed):
            if ends == (v, v):
                res.append(("blob", bnd))
        return res

    def dressed_links(self, u, v, exclude=()):
        res = [("edge", e) for e in self.parallel(u, v) if e not in exclude]
        for ends, bnd in self.dressings({u, v}):
            if ends == (min(u, v), max(u, v)):
                res.append(("blob", bnd))
        return res


def detect_patterns(m: FeynmanMap) -> PatternReport:
    rep = PatternReport()
    if m.special:
        return rep
    g = _Graph(m)
    for (u, v), es in sorted(g.between.items()):
        for sub in combinations(es, 5):
            rep.melons.append({"vertices": (u, v), "edges": sub})
        for sub in combinations(es, 4):
            rep.quartic_rungs.append({"vertices": (u, v), "edges": sub})
    for v in range(g.n):
        for sub in combinations(g.loops[v], 2):
            rep.double_tadpoles.append({"vertex": v, "edges": sub})
    # tadpoles
    for v in range(g.n):
        for e in g.loops[v]:
            other = g.dressed_loops(v, exclude=(e,))
            kind = "type_II" if other else "type_I"
            if kind == "type_I":
                for (a, b), _ in g.between.items():
                    if v not in (a, b):
                        continue
                    u = b if a == v else a
                    if len(g.dressed_links(u, v)) >= 2 and g.dressed_loops(u, removed={u, v}):
                        kind = "type_II"
                        break
            rep.tadpoles.append({"vertex": v, "edge": e, "type": kind})
    # dipoles
    for (u, v), es in sorted(g.between.items()):
        for pair in combinations(es, 2):
            rep.dipoles.append({"vertices": (u, v), "edges": pair,
                                "type": _dipole_type(g, u, v, pair)})
    # dipole-tadpoles
    for (u, v), es in sorted(g.between.items()):
        if not g.loops[u] or not g.loops[v]:
            continue
        for pair in combinations(es, 2):
            for lu in g.loops[u]:
                for lv in g.loops[v]:
                    rep.dipole_tadpoles.append({
                        "vertices": (u, v), "edges": pair, "loops": (lu, lv),
                        "separating": _separating(g, u, v, pair, lu, lv)})
    return rep


def _dipole_type(g: _Graph, u, v, pair) -> str:
    links = g.dressed_links(u, v, exclude=pair)
    if len(links) >= 3:
        return "type_II"  # inside a generalized melon
    if g.dressed_loops(u, removed={u, v}) and g.dressed_loops(v, removed={u, v}):
        return "type_II"  # inside a generalized dipole-tadpole
    # the dipole closes a dressed loop at one end that also carries another one
    for x, y in ((u, v), (v, u)):
        for ends, bnd in g.dressings({x}):
            if ends == (x, x) and set(bnd) == set(pair):
                if len(g.dressed_loops(x)) >= 2:
                    return "type_II"
    return "type_I"


def _separating(g: _Graph, u, v, pair, lu, lv) -> bool:
    """A dipole-tadpole whose free legs at one vertex close into a dressed loop
    there, so that vertex carries a generalized double-tadpole."""
    for x in (u, v):
        others = [e for e in g.loops[x] if e not in (lu, lv)]
        if others:
            return True
        if any(ends == (x, x) for ends, _ in g.dressings({u, v})):
            return True
    return False


# ------------------------------------------------------------------ melonic

def contract_melon(m: FeynmanMap) -> Optional[FeynmanMap]:
    """Replace one melon two-point sub-map by a plain edge; None if none."""
    if m.special:
        return None
    g = _Graph(m)
    for (u, v), es in sorted(g.between.items()):
        if len(es) == 6:
            return FeynmanMap.ring()
        if len(es) == 5 and not g.loops[u] and not g.loops[v]:
            used = {h for e in es for h in e}
            hu = next(h for h in range(VALENCE * u, VALENCE * u + VALENCE) if h not in used)
            hv = next(h for h in range(VALENCE * v, VALENCE * v + VALENCE) if h not in used)
            pu, pv = m.partner[hu], m.partner[hv]
            keep = [w for w in range(m.n_vertices) if w not in (u, v)]
            if not keep:
                return FeynmanMap.bare_edge()
            remap = {w: i for i, w in enumerate(keep)}

            def nid(h):
                return VALENCE * remap[h // VALENCE] + h % VALENCE

            partner: List[Optional[int]] = [None] * (VALENCE * len(keep))
            for a, b in m.edges():
                if a // VALENCE in (u, v) or b // VALENCE in (u, v):
                    continue
                partner[nid(a)], partner[nid(b)] = nid(b), nid(a)
            if pu is not None and pv is not None:
                partner[nid(pu)], partner[nid(pv)] = nid(pv), nid(pu)
                ext = [nid(h) for h in m.externals]
            else:
                # a leg of the melon becomes the leg of whatever the other
                # side was attached to
                through = {hu: pv, hv: pu}
                ext = [nid(through[h]) if h in through else nid(h) for h in m.externals]
            return FeynmanMap(partner, ext)
    return None


def _drop_two_point(m: FeynmanMap, removed, hu: int, hv: int) -> FeynmanMap:
    """Delete the vertices in ``removed`` whose only links to the rest are
    half-edges hu and hv, joining what hu and hv were attached to."""
    pu, pv = m.partner[hu], m.partner[hv]
    keep = [w for w in range(m.n_vertices) if w not in removed]
    if not keep:
        return FeynmanMap.bare_edge() if m.externals else FeynmanMap.ring()
    remap = {w: i for i, w in enumerate(keep)}

    def nid(h):
        return VALENCE * remap[h // VALENCE] + h % VALENCE

    partner: List[Optional[int]] = [None] * (VALENCE * len(keep))
    for a, b in m.edges():
        if a // VALENCE in removed or b // VALENCE in removed:
            continue
        partner[nid(a)], partner[nid(b)] = nid(b), nid(a)
    if pu is not None and pv is not None:
        partner[nid(pu)], partner[nid(pv)] = nid(pv), nid(pu)
        ext = [nid(h) for h in m.externals]
    else:
        through = {hu: pv, hv: pu}
        ext = [nid(through[h]) if h in through else nid(h) for h in m.externals]
    return FeynmanMap(partner, ext)


def contract_double_tadpole(m: FeynmanMap) -> Optional[FeynmanMap]:
    """Replace one double-tadpole two-point sub-map by a plain edge; None if none."""
    if m.special:
        return None
    g = _Graph(m)
    for v in range(m.n_vertices):
        if len(g.loops[v]) == 3:
            return FeynmanMap.ring()
        if len(g.loops[v]) == 2:
            used = {h for e in g.loops[v] for h in e}
            hu, hv = [h for h in range(VALENCE * v, VALENCE * v + VALENCE) if h not in used]
            if m.partner[hu] == hv:
                continue
            return _drop_two_point(m, {v}, hu, hv)
    return None


def reduces_to_bare_edge(m: FeynmanMap) -> bool:
    """True iff contracting melon and double-tadpole two-point sub-maps one
    at a time ends at the bare edge (two-point maps only)."""
    if m.kind != "two_point":
        raise ValueError("defined for two-point maps")
    while m.special != "bare_edge":
        nxt = contract_melon(m)
        if nxt is None:
            nxt = contract_double_tadpole(m)
        if nxt is None:
            return False
        m = nxt
    return True


def is_melonic(m: FeynmanMap) -> bool:
    """True iff repeated melon contraction ends at the ring map."""
    if m.kind != "vacuum":
        raise ValueError("melonicity is defined here for vacuum maps")
    while True:
        if m.special == "ring":
            return True
        nxt = contract_melon(m)
        if nxt is None:
            return False
        m = nxt


# ------------------------------------------------------ named small maps

def closed_melon() -> FeynmanMap:
    return FeynmanMap.build(2, [((0, i), (1, (6 - i) % 6)) for i in range(6)], root=0)


def double_tadpole_two_point(i: int = 1, j: int = 2, k: int = 3, l: int = 4) -> FeynmanMap:
    """One vertex, loops (i,j) and (k,l), legs on the remaining positions."""
    legs = [p for p in range(6) if p not in (i, j, k, l)]
    return FeynmanMap.build(1, [((0, i), (0, j)), ((0, k), (0, l))],
                            [(0, legs[0]), (0, legs[1])], root=(0, legs[0]))


def double_tadpole_chain(p: int) -> FeynmanMap:
    """Vacuum ring of p double-tadpoles: vertex t carries loops (1,2), (3,4)
    and is joined to its neighbours through positions 5 and 0."""
    if p < 1:
        raise ValueError("chain needs at least one double-tadpole")
    edges = []
    for t in range(p):
        edges += [((t, 1), (t, 2)), ((t, 3), (t, 4))]
        edges.append(((t, 5), ((t + 1) % p, 0)))
    return FeynmanMap.build(p, edges, root=0)


def insert_two_point(host: FeynmanMap, edge: Tuple[int, int], insert: FeynmanMap) -> FeynmanMap:
    """Cut internal edge (a, b) of ``host`` and splice a two-point map in."""
    a, b = edge
    if host.partner[a] != b:
        raise ValueError(f"{edge} is not an edge of the host")
    if insert.special == "bare_edge":
        return host
    off = len(host.partner)
    partner = list(host.partner) + [None if p is None else p + off for p in insert.partner]
    x, y = insert.externals[0] + off, insert.externals[1] + off
    partner[a], partner[x] = x, a
    partner[b], partner[y] = y, b
    return FeynmanMap(partner, host.externals, host.root)


def melon_two_point() -> FeynmanMap:
    """Two vertices joined by five edges, legs at position 0 of each."""
    return FeynmanMap.build(2, [((0, i), (1, 6 - i)) for i in range(1, 6)],
                            [(0, 0), (1, 0)], root=(0, 0))


# Two-point fragments used as face-count search targets.  Cyclic order is
# immaterial for these searches (see FrontierSearch), so positions are
# assigned in reading order.

def fragment_h0() -> FeynmanMap:
    """Two vertices, a self-loop on each, three parallel edges, one leg each."""
    return FeynmanMap.build(2, [((0, 1), (0, 2)), ((1, 1), (1, 2)),
                                ((0, 3), (1, 3)), ((0, 4), (1, 4)), ((0, 5), (1, 5))],
                            [(0, 0), (1, 0)], root=(0, 0))


def fragment_h4() -> FeynmanMap:
    """Four parallel edges; both legs on one vertex, a self-loop on the other."""
    return FeynmanMap.build(2, [((0, 2), (1, 0)), ((0, 3), (1, 1)), ((0, 4), (1, 2)),
                                ((0, 5), (1, 3)), ((1, 4), (1, 5))],
                            [(0, 0), (0, 1)], root=(0, 0))


def fragment_h5() -> FeynmanMap:
    """Legs on vertices 0 and 1, joined by three edges; each is joined to
    vertex 2 by two edges, and vertex 2 carries a self-loop."""
    return FeynmanMap.build(3, [((0, 1), (1, 1)), ((0, 2), (1, 2)), ((0, 3), (1, 3)),
                                ((0, 4), (2, 0)), ((0, 5), (2, 1)),
                                ((1, 4), (2, 2)), ((1, 5), (2, 3)),
                                ((2, 4), (2, 5))],
                            [(0, 0), (1, 0)], root=(0, 0))


def quartic_rung() -> FeynmanMap:
    """Two vertices joined by four edges, two legs on each."""
    return FeynmanMap.build(2, [((0, 2), (1, 5)), ((0, 3), (1, 4)),
                                ((0, 4), (1, 3)), ((0, 5), (1, 2))],
                            [(0, 0), (0, 1), (1, 0), (1, 1)], root=(0, 0))
