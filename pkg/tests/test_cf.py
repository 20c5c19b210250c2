import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ratlab.cf import (CertifiedReal, cf_expand, cylinder_interval, fig1_constant, from_decimal,
                       golden_ratio, reversed_fraction, sample_irrational, tail_and_reversal,
                       theta_at, theta_below, theta_seq)
from ratlab.errors import DomainViolation, IndexBeyondCertified, PrecisionExhausted
from ratlab.interval import RationalInterval
from ratlab.natext import norm, step_from_infinity, NEPoint

# values computed with mpmath at 30 digits from the Fibonacci convergents
GOLDEN_THETA = {1: 0.3819660112501051518, 2: 0.47213595499957939282,
                3: 0.43769410125094636616, 4: 0.45084971874737120511}


def test_sample_irrational_is_deterministic_dyadic():
    a, b = sample_irrational(1, 64), sample_irrational(1, 64)
    assert a == b
    assert (a.lo * (1 << 64)).denominator == 1
    assert sample_irrational(1, 128).width == Fraction(1, 1 << 128)
    assert sample_irrational(2, 64) != sample_irrational(1, 64)


def test_sample_irrational_rejects_low_precision():
    with pytest.raises(DomainViolation):
        sample_irrational(1, 32)


def test_golden_ratio_quotients_and_fibonacci_convergents():
    cf = cf_expand(golden_ratio(256))
    assert set(cf.quotients) == {1}
    conv = cf.convergents[:8]
    assert conv == ((0, 1), (1, 1), (1, 2), (2, 3), (3, 5), (5, 8), (8, 13), (13, 21))


def test_prefix_of_three_sevenths_plus_perturbation():
    x = CertifiedReal(Fraction(3, 7) + Fraction(1, 10**9), Fraction(3, 7) + Fraction(2, 10**9), 60)
    assert cf_expand(x).quotients[:2] == (2, 3)


def test_straddling_first_quotient_fails():
    with pytest.raises(PrecisionExhausted):
        cf_expand(CertifiedReal(Fraction(49, 100), Fraction(51, 100), 7))


def test_golden_theta_values():
    cf = cf_expand(golden_ratio(256))
    th = theta_seq(cf, 4)
    for n, v in GOLDEN_THETA.items():
        assert abs(float(th[n]) - v) < 1e-15
    assert th[0] == RationalInterval(cf.source.lo, cf.source.hi)


def test_theta_seq_beyond_certified_raises():
    cf = cf_expand(golden_ratio(64))
    with pytest.raises(IndexBeyondCertified):
        theta_seq(cf, cf.length + 1)


def test_tail_and_reversal_examples():
    cf = cf_expand(golden_ratio(256))
    _, y2 = tail_and_reversal(cf, 2)
    assert y2 == Fraction(-3, 2)
    x = CertifiedReal(Fraction(3, 7) + Fraction(1, 10**9), Fraction(3, 7) + Fraction(2, 10**9), 60)
    _, y0 = tail_and_reversal(cf_expand(x), 0)
    assert y0 == -2


def test_cylinder_examples():
    x = CertifiedReal(Fraction(3, 7) + Fraction(1, 10**9), Fraction(3, 7) + Fraction(2, 10**9), 60)
    assert cylinder_interval(cf_expand(x), 1) == (Fraction(3, 7), Fraction(4, 9))
    assert cylinder_interval(cf_expand(golden_ratio(64)), 0) == (Fraction(1), Fraction(1, 2))


def test_reversed_fraction():
    assert reversed_fraction((1, 1)) == Fraction(1, 2)
    assert reversed_fraction((2, 3)) == Fraction(2, 7)  # [3, 2]
    assert reversed_fraction(()) == 0


@given(st.integers(1, 10**6), st.sampled_from([64, 200, 512]))
def test_determinant_identity(seed, bits):
    cf = cf_expand(sample_irrational(seed, bits))
    conv = cf.convergents
    for k in range(1, cf.length + 1):
        (p0, q0), (p1, q1) = conv[k - 1], conv[k]
        assert p1 * q0 - p0 * q1 == (-1) ** (k + 1)


@given(st.integers(1, 10**6))
def test_theta_interval_is_sound_under_subsampling(seed):
    x = sample_irrational(seed, 128)
    cf = cf_expand(x)
    rng = random.Random(seed)
    inner = [x.lo + (x.hi - x.lo) * Fraction(rng.randrange(1, 1000), 1000) for _ in range(4)]
    for n in range(0, min(cf.length, 30)):
        iv = theta_at(x, *cf.convergents[n])
        p, q = cf.convergents[n]
        for v in inner:
            assert iv.contains(q * abs(q * v - p))


@given(st.integers(1, 10**6))
def test_two_formulas_for_theta_agree(seed):
    cf = cf_expand(sample_irrational(seed, 256))
    n_max = min(cf.length - 2, 60)
    th = theta_seq(cf, n_max)
    for n in range(n_max + 1):
        x_n, y_n = tail_and_reversal(cf, n)
        other = norm(NEPoint(x_n, y_n, boundary=True))
        assert th[n].overlaps(other)
        assert abs(th[n].mid - other.mid) < Fraction(1, 10**20)


@given(st.integers(1, 10**6))
def test_gauss_map_shifts_the_expansion(seed):
    x = sample_irrational(seed, 256)
    cf = cf_expand(x)
    tail = step_from_infinity(x).x
    shifted = cf_expand(tail)
    k = min(shifted.length, cf.length - 1)
    assert shifted.quotients[:k] == cf.quotients[1:k + 1]
    assert abs(shifted.length - (cf.length - 1)) <= 1


def test_theta_below_agrees_with_interval():
    cf = cf_expand(sample_irrational(5, 512))
    for n in range(1, 100):
        iv = theta_at(cf.source, *cf.convergents[n])
        for alpha in (Fraction(3, 10), Fraction(1, 2), Fraction(4, 5)):
            assert theta_below(cf.source, *cf.convergents[n], alpha) == iv.less_than(alpha)


def test_from_decimal_and_fig1_constant():
    x = from_decimal("3.14159", fractional_part=True)
    assert x.lo == Fraction(14159, 100000) and x.width == Fraction(1, 100000)
    with pytest.raises(DomainViolation):
        from_decimal("1e-5")
    fig = fig1_constant()
    # fractional part of pi^2 + sqrt(2) - 1 = 10.2838179634624536...
    assert abs(float(fig) - (math.pi ** 2 + math.sqrt(2) - 1 - 10)) < 1e-14
    assert cf_expand(fig).length > 38000
