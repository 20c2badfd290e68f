import itertools
import random
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from strandcalc.maps import (FeynmanMap, closed_melon, contract_double_tadpole, contract_melon,
                             detect_patterns, double_tadpole_chain, double_tadpole_two_point,
                             enumerate_maps, has_melon_or_double_tadpole, insert_two_point,
                             is_melon_map, is_melonic, melon_two_point, quartic_rung,
                             reduces_to_bare_edge)


def matchings(points):
    if not points:
        yield []
        return
    a, rest = points[0], points[1:]
    for i, b in enumerate(rest):
        for m in matchings(rest[:i] + rest[i + 1:]):
            yield [(a, b)] + m


def connected(n_vertices, pairs):
    parent = list(range(n_vertices))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for a, b in pairs:
        parent[find(a // 6)] = find(b // 6)
    return len({find(v) for v in range(n_vertices)}) == 1


def rooted_count_oracle(n_vertices, legs):
    """Labeled structures divided by vertex relabelings and rotations.

    Rooting at a half-edge (or at the incoming leg) kills every automorphism
    of a connected map, so the classes have full size V! 6^V."""
    half = list(range(6 * n_vertices))
    total = 0
    leg_choices = itertools.permutations(half, 2) if legs else [()]
    for ext in leg_choices:
        rest = [h for h in half if h not in ext]
        total += sum(1 for m in matchings(rest) if connected(n_vertices, m))
    roots = 1 if legs else 6 * n_vertices
    return total * roots // (factorial(n_vertices) * 6 ** n_vertices)


def random_vacuum_map(rng, n_vertices):
    while True:
        h = list(range(6 * n_vertices))
        rng.shuffle(h)
        partner = [None] * len(h)
        for a, b in zip(h[::2], h[1::2]):
            partner[a], partner[b] = b, a
        try:
            return FeynmanMap(partner, (), 0)
        except ValueError:  # disconnected draw
            continue


def test_one_vertex_vacuum_maps():
    assert len(enumerate_maps(1, "vacuum")) == 15


@pytest.mark.parametrize("n,kind", [(1, "vacuum"), (2, "vacuum"), (1, "two_point"),
                                    (2, "two_point")])
def test_rooted_counts_match_orbit_count(n, kind):
    legs = kind == "two_point"
    assert len(enumerate_maps(n, kind)) == rooted_count_oracle(n, legs)


def test_known_rooted_counts():
    assert len(enumerate_maps(2, "vacuum")) == 1695
    assert len(enumerate_maps(2, "two_point")) == 1695


def test_unrooted_classes_cover_rooted_maps():
    for n in (1, 2):
        e = enumerate_maps(n, "vacuum", rooted=False)
        assert sum(e.multiplicities) == len(enumerate_maps(n, "vacuum"))
        assert len(e) == {1: 5, 2: 174}[n]


def test_melon_maps_and_melonic():
    melons = [m for m in enumerate_maps(2, "two_point") if is_melon_map(m)]
    assert len(melons) == 120
    assert is_melonic(closed_melon())
    assert is_melonic(FeynmanMap.ring())
    assert not is_melonic(double_tadpole_chain(2))


def test_filter_excludes_melons_and_double_tadpoles():
    e = enumerate_maps(2, "vacuum", rooted=False, filter="no_melon_no_double_tadpole")
    assert len(e) == 89
    assert not any(has_melon_or_double_tadpole(m) for m in e)
    assert len(enumerate_maps(1, "vacuum", filter="no_melon_no_double_tadpole")) == 0


def test_double_tadpoles_reduce_to_bare_edge():
    dts = enumerate_maps(1, "two_point").maps
    assert len(dts) == 15
    assert all(reduces_to_bare_edge(m) for m in dts)
    assert contract_double_tadpole(double_tadpole_two_point()).special == "bare_edge"


def test_melon_contraction_of_closed_melon_is_ring():
    assert contract_melon(closed_melon()).special == "ring"
    assert contract_melon(double_tadpole_chain(3)) is None


def test_insertion_adds_vertices_and_stays_melonic():
    cm = closed_melon()
    chain = insert_two_point(cm, cm.edges()[0], melon_two_point())
    assert chain.n_vertices == 4 and is_melonic(chain)
    assert insert_two_point(cm, cm.edges()[0], FeynmanMap.bare_edge()) == cm
    with pytest.raises(ValueError):
        insert_two_point(cm, (0, 1), melon_two_point())


def test_json_round_trip():
    for m in enumerate_maps(2, "vacuum", rooted=False):
        assert FeynmanMap.from_json(m.to_json()).unrooted_code() == m.unrooted_code()


def test_patterns_of_named_maps():
    c = detect_patterns(closed_melon()).counts()
    assert c["melons"] == 6 and c["double_tadpoles"] == 0   # choose 5 of 6 parallel edges
    d = detect_patterns(double_tadpole_chain(1)).counts()
    assert d["double_tadpoles"] == 3 and d["tadpoles"] == 3
    r = detect_patterns(quartic_rung()).counts()
    assert r["quartic_rungs"] == 1 and r["dipoles"] == 6


def test_chain_structure():
    for p in range(1, 5):
        m = double_tadpole_chain(p)
        assert m.n_vertices == p and m.kind == "vacuum" and m.n_edges == 3 * p


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 6), st.integers(min_value=1, max_value=3))
def test_unrooted_code_ignores_relabeling(seed, n):
    rng = random.Random(seed)
    m = random_vacuum_map(rng, n)
    # relabel: permute vertices and rotate each one
    order = list(range(n))
    rng.shuffle(order)
    rot = [rng.randrange(6) for _ in range(n)]

    def move(h):
        v, i = divmod(h, 6)
        return 6 * order[v] + (i + rot[v]) % 6

    partner = [None] * (6 * n)
    for a, b in m.edges():
        partner[move(a)], partner[move(b)] = move(b), move(a)
    m2 = FeynmanMap(partner, (), move(0))
    assert m2.unrooted_code() == m.unrooted_code()
    assert is_melonic(m2) == is_melonic(m)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 6))
def test_melonic_maps_have_two_vertices_per_melon(seed):
    rng = random.Random(seed)
    m = random_vacuum_map(rng, 2)
    # with two vertices the only melonic vacuum map is the closed melon shape
    expected = all(u != v for u, v in m.edge_vertices())
    assert is_melonic(m) == expected
