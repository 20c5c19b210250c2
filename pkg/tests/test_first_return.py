from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ratlab.cf import cf_expand, golden_ratio, sample_irrational, tail_and_reversal
from ratlab.errors import DomainViolation, ReturnNotFound
from ratlab.first_return import (NoReturnWithinCap, Region, Returned, classify_region,
                                 in_omega_alpha, return_map, return_ratio, tau, theta_bar)
from ratlab.interval import RationalInterval
from ratlab.natext import NEPoint, inverse_step, norm, step
from ratlab.orbit import sample_omega_points


def around(v, width=Fraction(1, 10**12)):
    v = Fraction(v)
    return RationalInterval(v - width, v + width)


def test_in_omega_examples():
    assert in_omega_alpha(NEPoint(RationalInterval(Fraction(1, 2)), -2), Fraction(3, 5))
    assert not in_omega_alpha(NEPoint(around("0.79"), Fraction(-105, 100)), Fraction(1, 2))


def test_tau_examples():
    r = tau(NEPoint(around("0.3"), -2), Fraction(3, 5))
    assert isinstance(r, Returned) and r.tau == 1
    r = tau(NEPoint(around("0.79"), -3), Fraction(3, 5))
    assert r.tau == 2
    assert abs(float(r.point.x) - 0.762) < 1e-3 and r.point.y == Fraction(-15, 4)
    assert return_map(NEPoint(around("0.79"), -3), Fraction(3, 5)).y == Fraction(-15, 4)


def test_tau_no_return_on_golden_tail():
    cf = cf_expand(golden_ratio(3000))
    x5, y5 = tail_and_reversal(cf, 5)
    outcome = tau(NEPoint(x5, y5), Fraction(11, 25), cap=1000)
    assert outcome == NoReturnWithinCap(1000)
    with pytest.raises(ReturnNotFound):
        return_map(NEPoint(x5, y5), Fraction(11, 25), cap=1000)


@given(st.integers(1, 10**9))
def test_alpha_one_return_map_is_step(seed):
    p = sample_omega_points(seed, 1, 1)[0]
    assert return_map(p, 1) == step(p)


def test_classify_examples():
    assert classify_region(NEPoint(around("0.3"), -2), Fraction(3, 5)) is Region.OmegaPlus
    assert classify_region(NEPoint(around("0.8"), -3), Fraction(3, 5)) is Region.OmegaMinus
    assert classify_region(NEPoint(around("0.79"), Fraction(-105, 100)), Fraction(1, 2)) is Region.Nabla
    with pytest.raises(DomainViolation):
        classify_region(NEPoint(around("0.3"), -2), Fraction(2, 5))


@given(st.integers(1, 10**9), st.sampled_from([Fraction(1, 2), Fraction(3, 4), Fraction(1)]))
def test_dichotomy(seed, alpha):
    for p in sample_omega_points(seed, 5, alpha):
        region = classify_region(p, alpha)
        assert tau(p, alpha, cap=5).tau == (1 if region is Region.OmegaPlus else 2)
        if region is Region.OmegaMinus:
            # the intermediate point is outside Omega_alpha and steps back exactly
            mid = step(p)
            assert classify_region(mid, alpha) is Region.Nabla
            assert inverse_step(mid) == p


def test_theta_bar_alpha_one_is_whole_sequence():
    cf = cf_expand(sample_irrational(4, 512))
    seq = theta_bar(cf, 1, 50)
    assert seq.indices == list(range(1, 51))


def test_theta_bar_golden():
    cf = cf_expand(golden_ratio(3000))
    seq = theta_bar(cf, Fraction(11, 25), 2, cap=10)
    assert seq.indices == [1, 3]


@given(st.integers(1, 10**9), st.sampled_from([Fraction(3, 10), Fraction(1, 2), Fraction(4, 5)]))
def test_theta_bar_is_monotone_and_matches_orbit(seed, alpha):
    cf = cf_expand(sample_irrational(seed, 1024))
    seq = theta_bar(cf, alpha, 40)
    ns = [e.n for e in seq.entries]
    qs = [e.q_bar for e in seq.entries]
    assert ns == sorted(set(ns)) and qs == sorted(set(qs))
    for e in seq.entries[:10]:
        x_n, y_n = tail_and_reversal(cf, e.n)
        other = norm(NEPoint(x_n, y_n))
        assert e.theta_bar.overlaps(other)
        assert abs(e.theta_bar.mid - other.mid) < Fraction(1, 10**20)


def test_return_ratio_alpha_one():
    cf = cf_expand(sample_irrational(9, 512))
    assert return_ratio(cf, 1, 100) == 1.0
