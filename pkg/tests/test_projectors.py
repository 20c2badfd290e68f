import itertools
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from numeric_oracle import projector_matrix
from strandcalc.diagrams import Pairing, classify_pairing, compose_operators, trace_close
from strandcalc.exactpoly import RatPolyN
from strandcalc.projectors import (build_antisymmetric, build_projector,
                                   build_symmetric_traceless, build_vertex, symmetric_weight,
                                   verify_projector)

N = RatPolyN.var()


def binom_poly(shift, k):
    out = RatPolyN.const(1)
    for i in range(k):
        out = out * (N + shift - i)
    return out / 120 if k == 5 else out / 6


def operator_matrix(P, n):
    """Dense matrix of a diagram operator at a fixed N, built from deltas."""
    d = n ** 5
    eye = np.eye(n)
    letters = "abcdefghij"
    M = np.zeros((n,) * 10)
    for p, w in P.terms.items():
        subscripts = ",".join(letters[x - 1] + letters[y - 1] for x, y in p)
        M += float(w.evaluate_at(n)) * np.einsum(subscripts + "->" + letters, *([eye] * 5))
    return M.reshape(d, d)


def test_unknown_rep():
    with pytest.raises(ValueError):
        build_projector("Q")


def test_antisymmetric_weights():
    A = build_antisymmetric()
    assert len(A) == 120
    for p, w in A.terms.items():
        assert classify_pairing(p).tag == "unbroken"
    ident = Pairing([(i, i + 5) for i in range(1, 6)])
    swap = Pairing([(1, 7), (2, 6), (3, 8), (4, 9), (5, 10)])
    assert A.terms[ident] == RatPolyN.const(Fraction(1, 120))
    assert A.terms[swap] == RatPolyN.const(Fraction(-1, 120))


def test_symmetric_class_weights():
    assert symmetric_weight("unbroken") == RatPolyN.const(Fraction(1, 120))
    assert symmetric_weight("broken") == -2 / (120 * (N + 6))
    assert symmetric_weight("doubly_broken") == 8 / (120 * (N + 4) * (N + 6))
    S = build_symmetric_traceless()
    assert len(S) == 945


def literal_symmetric_sum():
    """Sum the three blocks term by term, labeled decompositions included."""
    out = {}

    def add(pairs, w):
        p = Pairing(pairs)
        out[p] = out.get(p, RatPolyN.const(0)) + w

    five = range(1, 6)
    for s in itertools.permutations(five):
        add([(i, 5 + s[i - 1]) for i in five], RatPolyN.const(Fraction(1, 120)))
    w1 = -2 / (120 * (N + 6))
    for pa in itertools.combinations(five, 2):
        ra = [i for i in five if i not in pa]
        for pb in itertools.combinations(five, 2):
            rb = [j for j in five if j not in pb]
            for s in itertools.permutations(range(3)):
                add([pa, (5 + pb[0], 5 + pb[1])] +
                    [(ra[k], 5 + rb[s[k]]) for k in range(3)], w1)
    w2 = 2 / (120 * (N + 4) * (N + 6))

    def labeled(side):
        for i1 in five:
            rest = [i for i in five if i != i1]
            for pair in itertools.combinations(rest, 2):
                other = tuple(i for i in rest if i not in pair)
                yield i1, pair, other

    for i1, p2, p3 in labeled(0):
        for j1, q2, q3 in labeled(1):
            add([(i1, 5 + j1), p2, p3, (5 + q2[0], 5 + q2[1]), (5 + q3[0], 5 + q3[1])], w2)
    return out


def test_symmetric_projector_equals_literal_block_sum():
    lit = literal_symmetric_sum()
    S = build_symmetric_traceless()
    assert set(lit) == set(S.terms)
    assert all(lit[p] == S.terms[p] for p in lit)


@pytest.mark.parametrize("rep", ["A", "S"])
def test_idempotent_and_symmetric(rep):
    v = verify_projector(build_projector(rep))
    assert v["idempotent"] and v["symmetric"]


def test_traces_are_dimensions():
    assert trace_close(build_projector("A")) == binom_poly(0, 5)
    dimS = binom_poly(4, 5) - binom_poly(2, 3)
    assert trace_close(build_projector("S")) == dimS
    assert dimS.evaluate_at(3) == 11 and dimS.evaluate_at(4) == 36
    for n in range(3, 9):
        assert trace_close(build_projector("A")).evaluate_at(n) == comb(n, 5)
        assert dimS.evaluate_at(n) == comb(n + 4, 5) - comb(n + 2, 3)


@pytest.mark.parametrize("rep,n", [("A", 5), ("S", 3), ("S", 4)])
def test_numeric_projector_agrees(rep, n):
    ours = operator_matrix(build_projector(rep), n)
    ref = projector_matrix(rep, n)
    assert np.allclose(ours, ref, atol=1e-10)
    assert np.allclose(ref @ ref, ref, atol=1e-10)
    expected = {("A", 5): 1, ("S", 3): 11, ("S", 4): 36}[(rep, n)]
    assert round(np.trace(ref)) == expected


def test_half_doubly_broken_weight_breaks_idempotence():
    S = build_symmetric_traceless()
    wrong = {p: (2 / (120 * (N + 4) * (N + 6)) if classify_pairing(p).tag == "doubly_broken"
                 else w) for p, w in S.terms.items()}
    from strandcalc.diagrams import DiagramOperator
    W = DiagramOperator(wrong)
    assert compose_operators(W, W) != W


@pytest.mark.parametrize("flavor", ["cyclic", "colorable"])
def test_vertex_kernels(flavor):
    k = build_vertex(flavor)
    assert len(k.matching) == 15
    # every pair of distinct half-edges shares exactly one strand
    seen = set()
    for a, b in k.matching:
        ha, hb = (a - 1) // 5, (b - 1) // 5
        assert ha != hb
        seen.add(frozenset((ha, hb)))
    assert len(seen) == 15


def test_unknown_vertex_flavor():
    with pytest.raises(ValueError):
        build_vertex("other")
