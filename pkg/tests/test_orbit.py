import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ratlab.cf import cf_expand, sample_irrational, theta_seq
from ratlab.distributions import c_alpha
from ratlab.errors import PrecisionExhausted
from ratlab.first_return import theta_bar
from ratlab.natext import measure_rectangle, norm
from ratlab.orbit import bits_for_terms, sample_omega_points, scan_orbit, scan_seed

ALPHAS = [Fraction(3, 10), Fraction(1, 2), Fraction(4, 5), Fraction(1)]


@given(st.integers(1, 10**9))
def test_scan_matches_exact_path(seed):
    x = sample_irrational(seed, 2048)
    scan = scan_orbit(x, 500, ALPHAS)
    cf = cf_expand(x, 501)
    n = min(len(scan), cf.length - 1)
    th = theta_seq(cf, n - 1)
    mids = np.array([float(v) for v in th.values])
    assert np.max(np.abs(mids - scan.theta[:n])) < 1e-15
    assert scan.quotients[:n] == list(cf.quotients[:n])
    for alpha in ALPHAS[:3]:
        exact = theta_bar(cf, alpha, 30).indices
        assert list(scan.return_indices(alpha)[:30]) == exact


def test_scan_log_q_and_levy():
    x = sample_irrational(7, 4096)
    scan = scan_orbit(x, 800, [1])
    cf = cf_expand(x, 801)
    for n in (1, 10, 500):
        assert scan.log_q[n] == pytest.approx(math.log(cf.convergents[n][1]), rel=1e-14)
    assert scan.levy_rate(1, 100) == pytest.approx(math.log(cf.convergents[100][1]) / 100,
                                                   rel=1e-14)


def test_scan_seed_is_deterministic_and_long_enough():
    a = scan_seed(3, 1000, [Fraction(1, 2)])
    b = scan_seed(3, 1000, [Fraction(1, 2)])
    assert len(a) == 1000
    assert np.array_equal(a.theta, b.theta)
    assert bits_for_terms(1000) == 4112


def test_scan_pairs_need_enough_returns():
    scan = scan_seed(1, 200, [Fraction(1, 2)])
    with pytest.raises(PrecisionExhausted):
        scan.pairs(Fraction(1, 2), 10**4)
    with pytest.raises(KeyError):
        scan.return_indices(Fraction(1, 3))


def test_sample_omega_points_lie_in_omega():
    alpha = Fraction(1, 2)
    pts = sample_omega_points(5, 200, alpha)
    assert all(norm(p).hi < alpha for p in pts)
    assert pts == sample_omega_points(5, 200, alpha)


@pytest.fixture(scope="module")
def long_orbits():
    # 200 seeds x 5000 steps = 10^6 orbit points
    scans = [scan_seed(s, 5000, [Fraction(1, 2), Fraction(4, 5)]) for s in range(1, 201)]
    xs = np.concatenate([s.x for s in scans])
    ys = np.concatenate([s.y for s in scans])
    returns = {a: np.concatenate([s.return_points(a) for s in scans])
               for a in (Fraction(1, 2), Fraction(4, 5))}
    return xs, ys, returns


RECTANGLES = [(0.1, 0.3, -3.0, -1.5), (0.5, 0.9, -1.8, -1.2), (0.0, 1.0, -math.inf, -5.0),
              (0.02, 0.2, -2.0, -1.0)]


def _within_three_sigma(inside: np.ndarray, p: float) -> bool:
    n = len(inside)
    sigma = math.sqrt(p * (1 - p) / n)
    return abs(inside.mean() - p) < 3 * sigma


def test_orbit_visits_rectangles_by_invariant_measure(long_orbits):
    xs, ys, _ = long_orbits
    assert len(xs) == 10**6
    for x0, x1, y0, y1 in RECTANGLES:
        inside = (xs >= x0) & (xs < x1) & (ys >= y0) & (ys < y1)
        assert _within_three_sigma(inside, measure_rectangle(x0, x1, y0, y1))


def test_returns_visit_rectangles_by_conditional_measure(long_orbits):
    _, _, returns = long_orbits
    for alpha, pts in returns.items():
        a = float(alpha)
        # rectangles inside Omega_alpha: x - y > 1/alpha everywhere
        rects = [(0.1, 0.3, -5.0, -1 / a - 0.1), (0.6, 0.9, -4.0, -1 / a - 0.0)]
        for x0, x1, y0, y1 in rects:
            p = c_alpha(a) * math.log(2) * measure_rectangle(x0, x1, y0, y1)
            inside = ((pts[:, 0] >= x0) & (pts[:, 0] < x1)
                      & (pts[:, 1] >= y0) & (pts[:, 1] < y1))
            assert _within_three_sigma(inside, p)
