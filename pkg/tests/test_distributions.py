import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate

from ratlab.cf import cf_expand, golden_ratio, sample_irrational
from ratlab.distributions import (ComparisonReport, DensityModel, Histogram, Variant, c_alpha,
                                  dl_conditional_cdf, dl_conditional_density, dl_printed_density,
                                  empirical_compare, estimate_levy, levy_limit, pair_density,
                                  pushforward_cell_masses, select_pair_variant)
from ratlab.errors import DomainViolation, InsufficientSamples
from ratlab.pairs import pair_map_numeric

LOG2 = math.log(2)

# mpmath, 30 digits, from the closed forms
C_ALPHA = {1: 1.4426950408889634074, 0.5: 2.0, 0.7: 1.5711604410407853488,
           0.8: 1.4925292287233753231}
LEVY = {1: 1.1865691104156254528, 0.5: 1.6449340668482264365, 0.8: 1.2275560870468942543,
        0.3: 2.7415567780803773941}
DL_08_AT_06 = 0.99501948581558354877
PAIR_1_AT_03 = 1.8033688011112042592
PAIR_07_AT_01_005 = 3.1427923677358045851  # (0.1, 0.05) lies in the minus part
GOLDEN_LEVY_1000 = 0.48088831792844600076  # log(F_1001) / 1000


def test_constants():
    for a, v in C_ALPHA.items():
        assert c_alpha(a) == pytest.approx(v, rel=1e-14)
    for a, v in LEVY.items():
        assert levy_limit(a) == pytest.approx(v, rel=1e-14)
    with pytest.raises(DomainViolation):
        c_alpha(0)


def test_dl_conditional_density_examples():
    assert dl_conditional_density(0.3, 0.5) == pytest.approx(2.0)
    assert dl_conditional_density(0.25, 1) == pytest.approx(1 / LOG2)
    assert dl_conditional_density(0.6, 0.8) == pytest.approx(DL_08_AT_06, rel=1e-14)
    assert dl_conditional_density(0.9, 0.8) == 0.0


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.6, 0.8, 1.0])
def test_dl_conditional_integrates_to_one_and_matches_cdf(alpha):
    total, _ = integrate.quad(lambda t: dl_conditional_density(t, alpha), 0, alpha,
                              points=[0.5] if alpha > 0.5 else None)
    assert total == pytest.approx(1.0, abs=1e-9)
    for t in np.linspace(0, alpha, 7):
        part, _ = integrate.quad(lambda s: dl_conditional_density(s, alpha), 0, t,
                                 points=[0.5] if t > 0.5 else None)
        assert dl_conditional_cdf(t, alpha) == pytest.approx(part, abs=1e-9)


def test_printed_density_is_flagged_and_renormalized():
    model = DensityModel.dl_conditional(0.8, printed=True)
    assert model.renormalized and "renormalized" in model.describe()
    assert model.raw_mass == pytest.approx(1 / LOG2, rel=1e-8)
    assert dl_printed_density(0.6, 0.8) == pytest.approx(DL_08_AT_06 / LOG2, rel=1e-12)


def test_pair_density_examples():
    assert pair_density(1e-12, 1e-12, 1) == pytest.approx(1 / LOG2)
    assert pair_density(0.3, 0.3, 1) == pytest.approx(PAIR_1_AT_03, rel=1e-14)
    assert pair_density(0.3, 0.3, 1, Variant.AlphaInRadical) == pytest.approx(PAIR_1_AT_03)
    assert pair_density(0.1, 0.05, 0.7) == pytest.approx(PAIR_07_AT_01_005, rel=1e-14)
    both = [pair_density(0.2, 0.2, 0.7, v) for v in Variant]
    assert both[0] != pytest.approx(both[1])
    with pytest.raises(DomainViolation):
        pair_density(0.6, 0.6, 0.7)


@pytest.mark.parametrize("alpha", [0.5, 0.7, 0.85, 1.0])
def test_pair_models_integrate_to_one(alpha):
    for v in Variant:
        model = DensityModel.pair_jager(alpha, v)
        edges = np.linspace(0, alpha, 21)
        assert model.cell_masses(edges, edges).sum() == pytest.approx(1.0, abs=1e-6)
    assert DensityModel.pair_jager(alpha).raw_mass == pytest.approx(1.0, abs=1e-6)


def test_pair_density_against_direct_quadrature():
    # nested quad, split where the density jumps (z = b(w)) and where the support ends
    alpha = 0.7

    def column(w):
        top = min(alpha, 1 - w)
        b = w - alpha + math.sqrt(1 - 4 * alpha * w) if w < 1 - alpha else 0.0
        pieces = [0.0] + ([b] if 0 < b < top else []) + [top]
        return sum(integrate.quad(lambda z: pair_density(w, z, alpha), lo, hi)[0]
                   for lo, hi in zip(pieces, pieces[1:]))

    total, _ = integrate.quad(column, 0, alpha, points=[1 - alpha], limit=200)
    assert total == pytest.approx(1.0, abs=1e-7)


@pytest.mark.parametrize("alpha", [0.7, 1.0])
def test_pushforward_oracle_selects_plain_radical(alpha):
    choice = select_pair_variant(alpha, grid=50)
    assert choice["accepted"] == "PlainRadical"
    assert choice["l1"]["PlainRadical"] < 0.02
    if alpha < 1:
        assert choice["l1"]["AlphaInRadical"] > 0.1
    else:
        assert choice["tie"]


def test_pushforward_of_sampled_points_matches_model():
    # rejection sampling of mu on (x, u) with y = -1/u: density (1 + u x)^-2
    alpha = 0.7
    rng = np.random.default_rng(1)
    x = rng.uniform(0, 1, 3_000_000)
    u = rng.uniform(0, 1, 3_000_000)
    keep = rng.uniform(0, 1, x.size) < (1 + u * x) ** -2
    w, z = pair_map_numeric(x[keep], -1 / u[keep], alpha)
    ok = np.isfinite(w)
    samples = np.column_stack([w[ok], z[ok]])
    edges = np.linspace(0, alpha, 11)
    freq = np.histogram2d(samples[:, 0], samples[:, 1], [edges, edges])[0] / len(samples)
    plain = DensityModel.pair_jager(alpha).cell_masses(edges, edges)
    other = DensityModel.pair_jager(alpha, Variant.AlphaInRadical).cell_masses(edges, edges)
    assert np.abs(freq - plain).sum() < 0.02
    assert np.abs(freq - other).sum() > 0.1
    oracle = pushforward_cell_masses(alpha, edges, edges)
    assert np.abs(oracle - plain).sum() < 0.02


def test_uniform_sanity_ks():
    rng = np.random.default_rng(2)
    rep = empirical_compare(rng.uniform(0, 1, 10**6), DensityModel.uniform(), 100)
    assert rep.ks < 0.002


def test_empirical_compare_needs_samples():
    with pytest.raises(InsufficientSamples):
        empirical_compare(np.zeros(10), DensityModel.uniform(), 10)


def test_histogram_merge_is_associative_and_matches_batch():
    rng = np.random.default_rng(3)
    data = rng.uniform(-0.1, 1.1, 3000)
    edges = np.linspace(0, 1, 11)
    parts = [Histogram.from_samples(d, edges) for d in np.array_split(data, 3)]
    left = parts[0].merge(parts[1]).merge(parts[2])
    right = parts[0].merge(parts[1].merge(parts[2]))
    whole = Histogram.from_samples(data, edges)
    assert np.array_equal(left.counts, right.counts) and np.array_equal(left.counts, whole.counts)
    assert left.outside == whole.outside and whole.total == 3000


def test_report_serialization():
    rep = ComparisonReport(alpha=0.5, model="m", variant=None, samples=10, l1=0.1, ks=0.2,
                           seeds=[1, 2], extra={"k": 3})
    d = rep.to_dict()
    assert d["k"] == 3 and d["seeds"] == [1, 2]
    assert rep.to_json().startswith('{"alpha": 0.5')


def test_estimate_levy_golden_and_stabilization():
    cf = cf_expand(golden_ratio(3000))
    assert estimate_levy(cf, 1, 1000) == pytest.approx(GOLDEN_LEVY_1000, rel=1e-12)
    assert estimate_levy(cf, 1, 1000, exact_walk=True) == pytest.approx(GOLDEN_LEVY_1000,
                                                                       rel=1e-12)
    cf = cf_expand(sample_irrational(1, 80000))
    a, b = estimate_levy(cf, 1, 10**4), estimate_levy(cf, 1, 2 * 10**4)
    assert abs(a - b) / b < 0.005
