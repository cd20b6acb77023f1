from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from quantalg import Dist, INF, ZERO, StructuralError, dist_max, dist_sum

finite_dists = st.fractions(min_value=0, max_value=50, max_denominator=12).map(Dist)
dists = st.one_of(finite_dists, st.just(INF))


def test_parse_and_format():
    assert str(Dist("1/2")) == "1/2"
    assert str(Dist("3")) == "3"
    assert str(Dist(Fraction(4, 2))) == "2"
    assert str(INF) == "inf"
    assert Dist("inf") == INF
    assert Dist("7/14") == Dist("1/2")


def test_rejects_bad_literals():
    with pytest.raises(StructuralError):
        Dist("-1")
    with pytest.raises(StructuralError):
        Dist(-3)
    with pytest.raises(StructuralError):
        Dist(0.5)
    with pytest.raises(StructuralError):
        Dist("1/0")
    with pytest.raises(StructuralError):
        Dist("abc")


def test_saturating_addition():
    assert Dist(1) + Dist("1/2") == Dist("3/2")
    assert INF + Dist(1) == INF
    assert Dist(1) + INF == INF
    assert INF + INF == INF


def test_infinity_is_maximum():
    assert Dist(10 ** 9) < INF
    assert not INF < INF
    assert max(Dist(3), INF) == INF
    assert min(Dist(3), INF) == Dist(3)


def test_helpers():
    assert dist_sum([]) == ZERO
    assert dist_max([]) == ZERO
    assert dist_sum([Dist(1), Dist(2), Dist("1/2")]) == Dist("7/2")
    assert dist_max([Dist(1), INF, Dist(2)]) == INF


@given(dists, dists)
def test_total_order(a, b):
    assert (a <= b) or (b <= a)
    assert (a <= b and b <= a) == (a == b)


@given(dists, dists, dists)
def test_addition_monotone_and_exact(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a + b >= a
    if not (a.is_infinite or b.is_infinite):
        assert (a + b).as_fraction() == a.as_fraction() + b.as_fraction()


@given(dists, dists)
def test_sum_dominates_max(a, b):
    assert a + b >= dist_max([a, b])


@given(dists)
def test_round_trip(a):
    assert Dist(str(a)) == a
