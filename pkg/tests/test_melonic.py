import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from strandcalc.exactpoly import RatPolyN
from strandcalc.maps import closed_melon, is_melonic
from strandcalc.melonic import (Series2, bookkeeping_check, compute_f1_f2, curated_family,
                                dominance_scan, generated_two_point_sum, lo_free_energy,
                                melon_leading_coefficient, melon_maps, sde_residual, solve_sde)
from strandcalc.projectors import build_projector

N = RatPolyN.var()
M = Fraction(1, 120) ** 4
DT_SCALAR_A = (N ** 4 / 14400 - 7 * N ** 3 / 4800 + 77 * N ** 2 / 7200 - N / 30
               + Fraction(17, 450)) / N ** 5
F1_S = ((N + 8) ** 2 * (N ** 5 + 19 * N ** 4 + 50 * N ** 3 - 356 * N ** 2 + 8 * N + 672)
        / (960 * N ** 4 * (N + 4) ** 2 * (N + 6) ** 2))

small = st.fractions(min_value=-3, max_value=3, max_denominator=5)


@pytest.fixture(scope="module")
def data_a():
    return compute_f1_f2("A")


def test_f1_a_is_sum_of_fifteen_equal_maps(data_a):
    assert data_a["f1"] == 15 * DT_SCALAR_A
    assert data_a["f1"].leading_power() == -1
    assert data_a["f1"].evaluate_at(4) == 0


def test_f1_s_closed_form():
    assert compute_f1_f2("S")["f1"] == F1_S


def test_m_both_reps(data_a):
    assert data_a["f2_leading"] == M
    assert data_a["f2_truncated"]
    assert data_a["melon_maps"] == 120 and data_a["distinct_closed_melons"] == 19
    assert compute_f1_f2("S")["f2_leading"] == M


def test_each_melon_contributes_the_same():
    P = build_projector("S")
    for m in melon_maps()[::23]:
        assert melon_leading_coefficient(m, P) == Fraction(1, 120) ** 5


def test_fuss_catalan_numbers():
    lo = lo_free_energy(1, 6)
    assert lo == [Fraction(comb(6 * n + 1, n), 6 * n + 1) for n in range(7)]
    assert lo[:5] == [1, 1, 6, 51, 506]
    with pytest.raises(ValueError):
        lo_free_energy(1, -1)


def test_free_energy_scaling_with_m():
    assert lo_free_energy(M, 1)[1] == Fraction(1, 207360000)
    assert lo_free_energy(M, 2)[2] == 6 * M ** 2


def test_sde_first_orders(data_a):
    f1 = data_a["f1"]
    K = solve_sde(f1, M, 3, 4)
    for k, c in f1.series_in_inverse_n(4).items():
        assert K.coefficient(1, k) == c
    assert K.coefficient(0, 0) == 1
    assert K.coefficient(2, 0) == M


def test_large_n_limit_is_free_energy(data_a):
    K = solve_sde(data_a["f1"], M, 8, 3)
    lo = lo_free_energy(M, 4)
    assert [K.coefficient(2 * n, 0) for n in range(5)] == lo
    assert all(K.coefficient(2 * n + 1, 0) == 0 for n in range(4))


def test_tadpole_power_changes_order_two():
    f1 = RatPolyN.const(Fraction(1, 3))
    K2 = solve_sde(f1, Fraction(1, 7), 2, 0, tadpole_power=2)
    K3 = solve_sde(f1, Fraction(1, 7), 2, 0, tadpole_power=3)
    assert K2.coefficient(2) == 2 * f1.constant_value() ** 2 + Fraction(1, 7)
    assert K3.coefficient(2) == 3 * f1.constant_value() ** 2 + Fraction(1, 7)


def test_sde_rejects_negative_orders():
    with pytest.raises(ValueError):
        solve_sde(RatPolyN.const(0), 0, -1, 0)


@settings(max_examples=30, deadline=None)
@given(small, small, st.integers(2, 3), st.integers(1, 6))
def test_series_solution_satisfies_equation(a, b, t, vmax):
    f1 = RatPolyN.const(a) + RatPolyN.const(b) / (N + 6)
    K = solve_sde(f1, b, vmax, 2, tadpole_power=t)
    assert sde_residual(K, f1, b, t).is_zero()


@settings(max_examples=40, deadline=None)
@given(st.lists(small, min_size=6, max_size=6), st.lists(small, min_size=6, max_size=6))
def test_series_algebra(xs, ys):
    keys = [(v, k) for v in range(3) for k in range(2)]
    x = Series2(dict(zip(keys, xs)), 3, 2)
    y = Series2(dict(zip(keys, ys)), 3, 2)
    assert x * y == y * x
    assert (x + y) * x == x * x + y * x
    assert (x ** 2) * x == x * (x ** 2)


def test_generated_two_point_sum_order_one(data_a):
    sums = generated_two_point_sum("A", V_max=1)
    assert sums[0] == RatPolyN.const(1)
    assert sums[1] == data_a["f1"]


def test_bookkeeping_selects_tadpole_power_three():
    r = bookkeeping_check("A", V_max=2, K_max=3)
    assert r["tadpole_power_3"] and not r["tadpole_power_2"]
    assert r["exact_order_2"] == {2: False, 3: True}


def test_curated_family_melonicity():
    fam = curated_family()
    assert is_melonic(fam["melon_chain_2"]) and is_melonic(fam["melon_chain_3"])
    assert not is_melonic(fam["double_tadpole_chain_4"])
    assert all(m.kind == "vacuum" for m in fam.values())


def test_dominance_up_to_one_vertex():
    rep = dominance_scan(1, "A", curated=False)
    assert rep.ok and len(rep.entries) == 6   # ring + five one-vertex maps
    assert all(e["leading_power"] <= 4 for e in rep.entries if e["V"] == 1)


def test_dominance_partial_flag():
    rep = dominance_scan(2, "A", time_budget=0)
    assert rep.partial and not rep.ok
