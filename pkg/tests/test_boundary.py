import random
from collections import deque

import pytest
from hypothesis import given, settings, strategies as st

from strandcalc.boundary import (DIPOLE_LABELS, TADPOLE_CHANNELS, TADPOLE_LABELS, AtLeast,
                                 BoundaryGraph, boundary_face_table, boundary_of,
                                 class_adjacency, classify_boundary, dipole_configuration,
                                 flip_apply, flip_distance, flip_neighbors, pairing_boundary,
                                 single_tadpole, single_tadpole_shapes, tadpole_channel,
                                 tadpole_configuration, verify_deletion_distances,
                                 verify_dipole_tadpole, verify_quartic_rung)
from strandcalc.diagrams import identity_pairing
from strandcalc.maps import quartic_rung
from strandcalc.stranded import StrandedGraph


def bfs_distance(a, b, cap):
    """Plain breadth-first search over single flips."""
    if a == b:
        return 0
    seen = {a}
    frontier = deque([(a, 0)])
    while frontier:
        x, d = frontier.popleft()
        if d == cap:
            continue
        for y in flip_neighbors(x):
            if y == b:
                return d + 1
            if y not in seen:
                seen.add(y)
                frontier.append((y, d + 1))
    return None


def random_walk(rng, b, steps):
    for _ in range(steps):
        b = rng.choice(flip_neighbors(b))
    return b


def test_regularity_is_enforced():
    with pytest.raises(ValueError):
        BoundaryGraph("ab", [(0, 1)])
    b = pairing_boundary("ab", [(0, 1)])
    assert b.degrees() == [5, 5] and b.multiplicity(0, 1) == 5


def test_json_round_trip():
    b = tadpole_configuration("1+3")
    assert BoundaryGraph.from_json(b.to_json()) == b


def test_flip_apply_channels():
    b = tadpole_configuration("2+2")
    edges = b.edges()
    i, j = 0, len(edges) - 1
    for ch in (1, 2):
        nb = flip_apply(b, i, j, ch)
        assert nb.degrees() == [5] * 4
        assert flip_distance(b, nb) <= 1
    with pytest.raises(ValueError):
        flip_apply(b, 0, 0, 1)
    with pytest.raises(ValueError):
        flip_apply(b, 0, 1, 3)


def test_distance_zero_and_incomparable():
    b = tadpole_configuration("4")
    assert flip_distance(b, b) == 0
    assert flip_distance(b, dipole_configuration("8")) == float("inf")


def test_cap_reports_lower_bound():
    a, b = tadpole_configuration("1+1+1+1"), tadpole_channel("parallel")
    d = flip_distance(a, b, cap=1)
    assert isinstance(d, AtLeast) and d == 2


def test_classify_representatives():
    for lab in TADPOLE_LABELS:
        assert classify_boundary(tadpole_configuration(lab), "tadpole4") == lab
    for lab in DIPOLE_LABELS:
        assert classify_boundary(dipole_configuration(lab), "dipole8") == lab
    with pytest.raises(ValueError):
        classify_boundary(tadpole_channel("cross"), "tadpole4")


def test_single_tadpole_boundaries_cover_every_pairing():
    shapes = single_tadpole_shapes("all945")
    assert sum(shapes.values()) == 945
    assert set(shapes) <= set(TADPOLE_LABELS)


def test_boundary_of_tadpole_with_identity_loop():
    frag = single_tadpole()
    g = StrandedGraph(frag, {frag.edges()[0]: identity_pairing(5)})
    b = boundary_of(g)
    assert b.n == 4 and b.degrees() == [5] * 4


def test_tadpole_classes_adjacent_by_merge_or_split():
    adj = class_adjacency("tadpole4")
    assert adj["1+1+1+1"] == {"1+1+2"}
    assert adj["4"] == {"1+3", "2+2"}


def test_deletion_distance_bounds():
    checks = verify_deletion_distances(cap=12, exhaustive=False)
    bad = [c.line() for c in checks if not c.ok]
    assert not bad, bad


def test_exhaustive_fragment_bounds():
    assert all(c.ok for c in verify_quartic_rung(12))
    assert all(c.ok for c in verify_dipole_tadpole(12))


def test_quartic_rung_face_table():
    table = boundary_face_table(quartic_rung(), "unbroken_only")
    assert len(table) == 138
    assert max(table.values()) == 6


@pytest.mark.parametrize("lab", TADPOLE_LABELS)
def test_astar_matches_bfs_on_tadpole_channels(lab):
    a = tadpole_configuration(lab)
    for ch in TADPOLE_CHANNELS:
        assert flip_distance(a, tadpole_channel(ch), 6) == bfs_distance(a, tadpole_channel(ch), 6)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9), st.integers(0, 4), st.integers(0, 4))
def test_distance_is_a_metric_on_random_walks(seed, s1, s2):
    rng = random.Random(seed)
    base = tadpole_configuration(rng.choice(TADPOLE_LABELS))
    a = random_walk(rng, base, s1)
    b = random_walk(rng, base, s2)
    dab, dba = flip_distance(a, b), flip_distance(b, a)
    assert dab == dba
    assert dab <= s1 + s2
    assert dab == bfs_distance(a, b, 8)
    c = random_walk(rng, b, 1)
    assert flip_distance(a, c) <= dab + 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_flips_preserve_regularity_and_reverse(seed):
    rng = random.Random(seed)
    b = random_walk(rng, dipole_configuration(rng.choice(DIPOLE_LABELS)), 2)
    nb = rng.choice(flip_neighbors(b))
    assert nb.degrees() == [5] * 8
    # a single flip can always be undone by a single flip
    assert b in flip_neighbors(nb)
