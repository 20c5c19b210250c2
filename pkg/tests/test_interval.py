from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ratlab.errors import DomainViolation, PrecisionExhausted, StraddlesThreshold
from ratlab.interval import RationalInterval, as_fraction, fraction_from_coprime, ratio_less

fractions = st.fractions(min_value=-10, max_value=10, max_denominator=10**6)


@st.composite
def intervals(draw, positive=False):
    a = draw(fractions)
    b = draw(fractions)
    lo, hi = min(a, b), max(a, b)
    if positive:
        lo, hi = abs(lo) + Fraction(1, 7), abs(hi) + abs(lo) + Fraction(1, 7)
    return RationalInterval(lo, hi)


def points_of(iv):
    return [iv.lo, iv.hi, iv.mid, iv.lo + (iv.hi - iv.lo) / 3]


@given(intervals(), intervals())
def test_sum_product_difference_enclose_pointwise_results(a, b):
    for u in points_of(a):
        for v in points_of(b):
            assert (a + b).contains(u + v)
            assert (a - b).contains(u - v)
            assert (a * b).contains(u * v)


@given(intervals(), intervals(positive=True))
def test_division_encloses_pointwise_quotients(a, b):
    for u in points_of(a):
        for v in points_of(b):
            assert (a / b).contains(u / v)


@given(intervals(positive=True))
def test_sqrt_encloses_true_root(iv):
    s = iv.sqrt(64)
    for v in points_of(iv):
        assert s.lo ** 2 <= v <= s.hi ** 2
    assert s.width <= iv.sqrt(10).width


def test_floor_and_straddles():
    assert RationalInterval(Fraction(5, 2), Fraction(11, 4)).floor() == 2
    with pytest.raises(PrecisionExhausted):
        RationalInterval(Fraction(9, 10), Fraction(11, 10)).floor()
    iv = RationalInterval(Fraction(1, 3), Fraction(1, 2))
    assert iv.less_than(Fraction(3, 5))
    assert not iv.less_than(Fraction(1, 3))
    with pytest.raises(StraddlesThreshold):
        iv.less_than(Fraction(2, 5))


def test_reciprocal_of_interval_through_zero_fails():
    with pytest.raises(DomainViolation):
        RationalInterval(-1, 1).reciprocal()


def test_empty_interval_rejected():
    with pytest.raises(ValueError):
        RationalInterval(1, 0)


def test_float_conversion_uses_decimal_repr():
    assert as_fraction(0.1) == Fraction(1, 10)
    with pytest.raises(DomainViolation):
        as_fraction(float("inf"))


@given(st.integers(1, 10**12), st.integers(1, 10**12))
def test_coprime_constructor_matches_fraction(n, d):
    f = Fraction(n, d)
    g = fraction_from_coprime(f.numerator, f.denominator)
    assert g == f and hash(g) == hash(f)


@given(fractions, fractions)
def test_ratio_less(a, b):
    assert ratio_less(a.numerator, a.denominator, b.numerator, b.denominator) == (a < b)
