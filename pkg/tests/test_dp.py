import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from cantor_spectra import dimension_upper_bound, dp_level_points, intersect_dp, make_system, uniform_bound_experiment
from cantor_spectra.dp import digit_expansion, minimal_level, translate_points

from oracles import brute_force_member


def test_middle_third_dyadics():
    r = intersect_dp(make_system(3, [0, 2]), 2, 8, window=3)
    assert r.points == (F(0), F(1, 4), F(3, 4), F(1))
    assert r.levels == (0, 2, 2, 0)
    assert r.stabilized
    assert r.max_denominator == 4


def test_full_digit_control_grows():
    r = intersect_dp(make_system(3, [0, 1, 2]), 2, 5, window=3)
    assert r.cumulative_counts == (2, 3, 5, 9, 17, 33)
    assert not r.stabilized


def test_q4_base3_example():
    r = intersect_dp(make_system(4, [0, 1]), 3, 6, window=3)
    assert r.points == (F(0), F(1, 3))


def test_not_coprime_warns():
    with pytest.warns(UserWarning, match="gcd"):
        dp_level_points(make_system(4, [0, 1]), 2, 3)


def test_too_few_levels_cannot_stabilize():
    r = intersect_dp(make_system(3, [0, 2]), 2, 3, window=6)
    assert not r.stabilized


def test_minimal_level():
    assert minimal_level(F(3, 8), 2) == 3
    assert minimal_level(F(5), 2) == 0
    assert minimal_level(F(1, 6), 2) is None


@settings(max_examples=40, deadline=None)
@given(
    st.integers(3, 5),
    st.sets(st.fractions(min_value=-3, max_value=3, max_denominator=2), min_size=2, max_size=3),
    st.sampled_from([2, 3, 5, 7]),
)
def test_level_points_against_brute_force(q, digits, p):
    if q % p == 0:
        return
    sys_ = make_system(q, digits)
    n = 3
    den = p**n
    lo, hi = sys_.hull_lo, sys_.hull_hi
    expected = [F(k, den) for k in range(math.ceil(lo * den), math.floor(hi * den) + 1) if brute_force_member(q, sys_.digits, F(k, den))]
    assert dp_level_points(sys_, p, n) == expected


def test_cumulative_counts_are_consistent():
    r = intersect_dp(make_system(5, [0, 1, 3]), 2, 7, window=3)
    # levels[i] is the minimal level of points[i]
    assert list(r.levels) == [minimal_level(x, 2) for x in r.points]
    assert list(r.cumulative_counts) == [sum(1 for n in r.levels if n <= k) for k in range(8)]


def test_dimension_bound_examples():
    b, m = dimension_upper_bound(make_system(3, [0, 2]), 1)
    assert abs(b - math.log(2) / math.log(3)) < 1e-12
    b, m = dimension_upper_bound(make_system(3, [0, 1, 3]), 2)
    assert abs(b - math.log(8) / (2 * math.log(3))) < 1e-12 and m == 2
    assert dimension_upper_bound(make_system(3, [0, 1, 2]), 3) == (1.0, 1)


def test_digit_expansion():
    assert digit_expansion(make_system(3, [0, 1, 3]), 2) == [F(k) for k in (0, 1, 3, 4, 6, 9, 10, 12)]


@pytest.mark.parametrize("q", range(3, 9))
def test_gap_digit_sets_have_dimension_below_one(q):
    # A = {0, 1, ..., q-2, q}: qA + A misses q - 1 + ..., so #A_2 < q^2
    digits = list(range(q - 1)) + [q]
    b, _ = dimension_upper_bound(make_system(q, digits), 2)
    assert b < 1


def test_uniform_bound_example():
    rep = uniform_bound_experiment(make_system(5, [0, 1]), 2, [0, F(1, 3), F(-1, 7)], 10, window=6)
    assert rep.difference_report.points == (F(-1, 4), F(0), F(1, 4))
    assert rep.certified_bound == 2
    assert rep.counts[0] == 2
    assert rep.within_bound


def test_uniform_bound_unavailable_when_difference_set_large():
    rep = uniform_bound_experiment(make_system(3, [0, 2]), 2, [F(1, 5)], 10)
    assert rep.certified_bound is None
    assert "#(A-A)" in rep.reason
    assert rep.counts == (3,)


@settings(max_examples=30, deadline=None)
@given(st.fractions(min_value=-1, max_value=1, max_denominator=40))
def test_translate_points_brute_force(alpha):
    sys_ = make_system(5, [0, 1])
    pts = translate_points(sys_, 2, alpha, 5)
    for x in pts:
        assert x.denominator in (1, 2, 4, 8, 16, 32)
        assert brute_force_member(5, sys_.digits, x + alpha)
