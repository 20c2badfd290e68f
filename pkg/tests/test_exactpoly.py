from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from strandcalc.exactpoly import (InterpolationError, PoleError, RatPolyN, UnderdeterminedError,
                                  from_factors, interpolate_rational)

N = RatPolyN.var()
small = st.fractions(min_value=-5, max_value=5, max_denominator=6)
coeffs = st.lists(small, min_size=1, max_size=4)


def f1_closed_form():
    return (N - 4) ** 2 * (N * N - 13 * N + 34) / (115200 * N ** 5)


def test_reduction_to_canonical_form():
    assert (N * N - 16) / (N - 4) == N + 4
    assert str((2 * N + 2) / (4 * N + 4)) == "1/2"
    assert (N - 4) / (N - 4) == RatPolyN.const(1)


def test_closed_form_values():
    f = f1_closed_form()
    assert f.evaluate_at(10) == Fraction(1, 80000000)
    assert f.evaluate_at(4) == 0


def test_pole_is_reported():
    with pytest.raises(PoleError):
        (1 / (N + 6)).evaluate_at(-6)


def test_large_n_series():
    f = (N + 1) / (N * N)
    assert f.series_in_inverse_n(3) == {1: 1, 2: 1}
    g = 1 / (N + 6)
    # 1/(N+6) = 1/N - 6/N^2 + 36/N^3 - ...
    assert g.series_in_inverse_n(3) == {1: 1, 2: -6, 3: 36}


def test_leading_power_and_coefficient():
    f = (3 * N ** 4 + 1) / (2 * N)
    assert f.leading_power() == 3
    assert f.leading_coefficient() == Fraction(3, 2)


def test_from_factors_matches_arithmetic():
    assert from_factors(Fraction(1, 960), [(8, 2)], [(0, 4), (4, 2), (6, 2)]) == \
        (N + 8) ** 2 / (960 * N ** 4 * (N + 4) ** 2 * (N + 6) ** 2)


def test_json_round_trip():
    f = f1_closed_form()
    assert RatPolyN.from_json(f.to_json()) == f


def test_interpolation_recovers_closed_form():
    f = f1_closed_form()
    samples = [(n, f.evaluate_at(n)) for n in range(6, 21)]
    assert interpolate_rational(samples, (4, 5)) == f


def test_interpolation_needs_enough_points():
    f = f1_closed_form()
    with pytest.raises(UnderdeterminedError):
        interpolate_rational([(n, f(n)) for n in range(6, 10)], (4, 5))


def test_interpolation_rejects_misfit():
    samples = [(n, Fraction(1, n * n + 1)) for n in range(1, 8)]
    with pytest.raises(InterpolationError):
        interpolate_rational(samples, (1, 1))


@settings(max_examples=60, deadline=None)
@given(coeffs, coeffs, coeffs)
def test_field_axioms(a, b, c):
    x, y, z = RatPolyN.poly(a), RatPolyN.poly(b), RatPolyN.poly(c) + N ** 3 + 7
    assert (x + y) * z == x * z + y * z
    assert (x * y) / z * z == x * y
    assert x - x == RatPolyN.const(0)


@settings(max_examples=60, deadline=None)
@given(coeffs, st.integers(min_value=7, max_value=30))
def test_evaluation_is_a_homomorphism(a, n):
    x = RatPolyN.poly(a)
    y = 1 / (N + 6)
    assert (x * y).evaluate_at(n) == x.evaluate_at(n) * y.evaluate_at(n)
    assert (x + y).evaluate_at(n) == x.evaluate_at(n) + y.evaluate_at(n)


@settings(max_examples=40, deadline=None)
@given(coeffs, coeffs)
def test_interpolation_round_trip(a, b):
    num = RatPolyN.poly(a)
    den = RatPolyN.poly(b) + 100 * N ** 2 + 1000  # no integer poles in range
    f = num / den
    pts = [(n, f(n)) for n in range(1, 12)]
    assert interpolate_rational(pts, (3, 5)) == f
