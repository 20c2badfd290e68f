import itertools
import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from strandcalc.diagrams import all_pairings, classify_pairing, closure_cycles, identity_pairing
from strandcalc.exactpoly import RatPolyN
from strandcalc.maps import (FeynmanMap, closed_melon, double_tadpole_chain,
                             double_tadpole_two_point, enumerate_maps, insert_two_point,
                             melon_two_point)
from strandcalc.projectors import build_vertex
from strandcalc.stranded import (StrandedGraph, amplitude_coefficient_SA, census_degrees,
                                 check_census_bounds, check_face_count_bounds,
                                 check_open_strand_bounds, configuration_census, degree_census,
                                 degree_from_census, degree_simplified, edge_weight,
                                 faces_and_degree, internal_faces, max_faces_search,
                                 min_degree_vacuum, universe_pairings)

ALL = list(all_pairings(5))
UNBROKEN = [p for p in ALL if classify_pairing(p).tag == "unbroken"]
V2 = enumerate_maps(2, "vacuum", rooted=False).maps


def faces_oracle(m, cfg, vertex):
    """Faces as connected components of the incidence graph: each
    (half-edge, slot) has one corner link and one edge link."""
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            x = parent[x]
        return x

    def union(x, y):
        parent[find(x)] = find(y)

    for v in range(m.n_vertices):
        for (pos, k), (pos2, k2) in vertex.corners.items():
            union((6 * v + pos, k), (6 * v + pos2, k2))
    for (a, b), p in cfg.items():
        for x, y in p:
            ex = (a, x - 1) if x <= 5 else (b, x - 6)
            ey = (a, y - 1) if y <= 5 else (b, y - 6)
            union(ex, ey)
    lengths = Counter()
    for v in range(m.n_vertices):
        for (pos, k) in vertex.corners:
            lengths[find((6 * v + pos, k))] += 1
    # every corner is counted from both of its ends
    return sorted(c // 2 for c in lengths.values())


def random_config(rng, m, pool=ALL):
    return {e: rng.choice(pool) for e in m.edges()}


# ---------------------------------------------------------------- examples

def test_unbroken_identity_ring_has_degree_zero():
    g = StrandedGraph.ring(identity_pairing(5))
    d = faces_and_degree(g)
    assert d["F"] == 5 and d["omega"] == 0


def test_ring_degrees_by_class():
    for p in ALL[::7]:
        d = faces_and_degree(StrandedGraph.ring(p))
        pen = {"unbroken": 0, "broken": 1, "doubly_broken": 2}[classify_pairing(p).tag]
        assert d["omega"] == 5 + pen - closure_cycles(p)


def test_degree_formulas():
    assert degree_from_census(F=15, V=2, B1=0, B2=0) == 0
    assert degree_simplified({3: 10}, 0, 0) == 5 + 10 * (1 - 1)
    with pytest.raises(ValueError):
        StrandedGraph(closed_melon(), {})


def test_json_round_trip():
    rng = random.Random(1)
    m = closed_melon()
    g = StrandedGraph(m, random_config(rng, m))
    g2 = StrandedGraph.from_json(g.to_json())
    assert faces_and_degree(g2) == faces_and_degree(g)


def test_edge_weights():
    ident = identity_pairing(5)
    assert edge_weight(ident, "A") == RatPolyN.const(Fraction(1, 120))
    broken = next(p for p in ALL if classify_pairing(p).tag == "broken")
    assert edge_weight(broken, "A").is_zero()
    N = RatPolyN.var()
    assert edge_weight(broken, "S") == -2 / (120 * (N + 6))


# ---------------------------------------------------------------- oracles

@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 9), st.sampled_from(["cyclic", "colorable"]))
def test_tracing_matches_union_find(seed, flavor):
    rng = random.Random(seed)
    m = rng.choice(V2)
    vertex = build_vertex(flavor)
    cfg = random_config(rng, m)
    t = StrandedGraph(m, cfg, vertex).trace()
    assert sorted(t.faces) == faces_oracle(m, cfg, vertex)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_both_degree_formulas_agree(seed):
    rng = random.Random(seed)
    m = rng.choice(V2)
    d = faces_and_degree(StrandedGraph(m, random_config(rng, m)))
    assert d["omega"] == degree_simplified(d["F_p"], d["B1"], d["B2"])
    assert sum(p * c for p, c in d["F_p"].items()) == 30


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 9), st.sampled_from(["A", "S"]))
def test_configuration_amplitude_closed_form(seed, rep):
    rng = random.Random(seed)
    m = rng.choice(V2)
    pool = UNBROKEN if rep == "A" else ALL
    g = StrandedGraph(m, random_config(rng, m, pool))
    # the closed form is checked against the edge-weight product inside
    a = amplitude_coefficient_SA(g, rep)
    assert a.leading_power() == -faces_and_degree(g)["omega"]


def test_double_tadpole_max_faces_by_brute_force():
    m = double_tadpole_two_point()
    edges = m.edges()
    best = Counter()
    for p, q in itertools.product(UNBROKEN, repeat=2):
        g = StrandedGraph(m, {edges[0]: p, edges[1]: q})
        best[internal_faces(g)["F_internal"]] += 1
    top = max(best)
    assert top == 4
    assert max_faces_search(m, "any", "unbroken_only").max_faces == top


def test_max_faces_examples():
    assert max_faces_search(melon_two_point(), "unbroken", "unbroken_only").max_faces == 10
    r = max_faces_search(closed_melon(), "any", "unbroken_only")
    assert r.max_faces == 15 and not r.lower_bound_only
    g = StrandedGraph(closed_melon(), r.witness)
    assert faces_and_degree(g)["omega"] == 0


@pytest.mark.parametrize("idx", range(0, 174, 29))
def test_min_degree_matches_census(idx):
    m = V2[idx]
    census = degree_census(m, "unbroken_only")
    assert sum(census.values()) == 120 ** 6
    lo = min(degree_from_census(f, 2, b1, b2) for f, b1, b2 in census)
    assert lo == min_degree_vacuum(m, "unbroken_only")


def test_length_census_is_consistent_with_degree_census():
    m = enumerate_maps(2, "vacuum", rooted=False, filter="no_melon_no_double_tadpole").maps[0]
    full = configuration_census(m, "unbroken_only", length_cap=3)
    assert sum(full.values()) == 120 ** 6
    by_degree = census_degrees(full, 2)
    plain = Counter()
    for (f, b1, b2), c in degree_census(m, "unbroken_only").items():
        plain[degree_from_census(f, 2, b1, b2)] += c
    assert by_degree == plain


def test_closed_melon_census():
    census = degree_census(closed_melon(), "unbroken_only")
    # a single configuration reaches 15 faces; its weight (1/120)^6 is the
    # leading coefficient of the closed-melon amplitude
    assert census[(15, 0, 0)] == 1
    assert min(degree_from_census(f, 2, b1, b2) for f, b1, b2 in census) == 0


def test_census_bounds_on_small_maps():
    for m in enumerate_maps(1, "vacuum", rooted=False).maps:
        census = configuration_census(m, "all945", length_cap=3)
        r = check_census_bounds(census, 1, 2)
        assert r["configurations"] == 945 ** 3
        assert r["bound_violations"] == 0
        assert r["short_face_free_negative"] == 0


# ---------------------------------------------------------------- properties

@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_face_count_bound_every_k(seed):
    rng = random.Random(seed)
    m = rng.choice(V2)
    d = faces_and_degree(StrandedGraph(m, random_config(rng, m)))
    for k in range(2, 31):
        assert check_face_count_bounds(d["F"], d["F_p"], k)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_no_short_faces_means_nonnegative_degree(seed):
    rng = random.Random(seed)
    m = rng.choice(V2)
    d = faces_and_degree(StrandedGraph(m, random_config(rng, m)))
    if not d["F_p"].get(1) and not d["F_p"].get(2):
        assert d["omega"] >= 0


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_open_strand_bounds_on_two_point_maps(seed):
    rng = random.Random(seed)
    m = rng.choice(enumerate_maps(2, "two_point").maps)
    r = internal_faces(StrandedGraph(m, random_config(rng, m)))
    assert sum(r["l_i"].values()) == 5
    assert r["I"] + r["l"] == 5 * m.n_edges
    for k in range(1, 8):
        assert check_open_strand_bounds(r["l_i"], k, p=1)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_faces_across_a_two_edge_cut(seed):
    """Insert a melon into an edge of a closed melon; the faces of the glued
    graph are those inside each piece plus one to five faces that cross the
    two cut edges."""
    rng = random.Random(seed)
    host = closed_melon()
    a, b = host.edges()[0]
    g = insert_two_point(host, (a, b), melon_two_point())
    cfg = random_config(rng, g, UNBROKEN if seed % 2 else ALL)
    F = faces_and_degree(StrandedGraph(g, cfg))["F"]
    off = len(host.partner)
    # piece 1: the inserted melon, legs on the half-edges glued to a and b
    ins = melon_two_point()
    legs = [x + off for x in ins.externals]
    p1_edges = [e for e in g.edges() if e[0] >= off and e[1] >= off]
    partner1 = [None] * 12
    for x, y in p1_edges:
        partner1[x - off], partner1[y - off] = y - off, x - off
    piece1 = FeynmanMap(partner1, ins.externals, ins.externals[0])
    cfg1 = {(x - off, y - off): cfg[(x, y)] for x, y in p1_edges}
    # piece 2: the host with edge (a, b) cut open
    partner2 = list(host.partner)
    partner2[a] = partner2[b] = None
    piece2 = FeynmanMap(partner2, (a, b), a)
    cfg2 = {e: cfg[e] for e in piece2.edges()}
    f1 = internal_faces(StrandedGraph(piece1, cfg1))["F_internal"]
    f2 = internal_faces(StrandedGraph(piece2, cfg2))["F_internal"]
    assert set(legs) == {g.partner[a], g.partner[b]}
    assert 1 <= F - f1 - f2 <= 5


def test_chain_configurations_grow_one_power_per_double_tadpole():
    powers = [max_faces_search(double_tadpole_chain(p), "any", "unbroken_only").max_faces - 5 * p
              for p in (2, 3, 4)]
    assert powers == [3, 4, 5]


def test_census_bound_needs_corners():
    from strandcalc.stranded import check_census_bounds, configuration_census
    ring = configuration_census(FeynmanMap.ring(), "unbroken_only", length_cap=3)
    assert check_census_bounds(ring, 0)["bound_violations"] == 120
    for m in enumerate_maps(1, "vacuum", rooted=False).maps:
        r = check_census_bounds(configuration_census(m, "unbroken_only", length_cap=3), 1)
        assert r["configurations"] == 120 ** 3 and r["bound_violations"] == 0
