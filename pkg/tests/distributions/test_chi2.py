import math

import numpy as np
import pytest
from scipy import stats

import confball
from confball.distributions import NoncentralChi2

CDF_POINTS = [
    # (x, z, d)
    (0.5, 0.0, 1),
    (3.0, 1.0, 2),
    (10.0, 10.0, 5),
    (120.0, 20.0, 100),
    (80.0, 1.0, 100),
    (1000.0, 0.0, 995),
    (1050.0, 100.0, 995),
    (2100.0, 1000.0, 995),
    (1900.0, 1000.0, 995),
    (5.0, 0.3, 1),
    (40.0, 30.0, 2),
    (1.0, 25.0, 5),
]

SANDWICH_Z = [0.0, 1.0, 10.0, 100.0, 1000.0]
SANDWICH_D = [1, 2, 5, 100, 995]
SANDWICH_U = [1e-4, 1e-2, 0.05, 0.2, 0.5]


def test_central_cdf():
    for x, d in [(0.5, 1), (3.0, 2), (1000.0, 995), (12.0, 20)]:
        np.testing.assert_allclose(
            confball.distributions.central_chi2_cdf(x, d),
            stats.chi2.cdf(x, d),
            rtol=1e-12,
        )


def test_noncentral_cdf_matches_scipy():
    for x, z, d in CDF_POINTS:
        expected = stats.ncx2.cdf(x, d, z) if z > 0 else stats.chi2.cdf(x, d)
        np.testing.assert_allclose(
            confball.distributions.noncentral_chi2_cdf(
                x, NoncentralChi2(z, d)),
            expected,
            rtol=1e-7,
            atol=1e-12,
        )


def test_cdf_and_sf_are_complementary():
    for x, z, d in CDF_POINTS:
        p = NoncentralChi2(z, d)
        total = (confball.distributions.noncentral_chi2_cdf(x, p)
                 + confball.distributions.chi2_sf(x, p))
        np.testing.assert_allclose(total, 1.0, atol=1e-12)


def test_small_probabilities_keep_relative_accuracy():
    p = NoncentralChi2(400.0, 995)
    x = 1031.0
    k = np.arange(0, 2000)
    reference = np.sum(stats.poisson.pmf(k, 200.0)
                       * stats.chi2.cdf(x, 995 + 2 * k))
    value = confball.distributions.noncentral_chi2_cdf(x, p)
    assert value < 1e-6
    np.testing.assert_allclose(value, reference, rtol=1e-8)


def test_cdf_edge_cases():
    p = NoncentralChi2(5.0, 3)
    assert confball.distributions.noncentral_chi2_cdf(0.0, p) == 0.0
    assert confball.distributions.chi2_sf(0.0, p) == 1.0
    with pytest.raises(confball.errors.DomainError):
        confball.distributions.noncentral_chi2_cdf(-1.0, p)
    with pytest.raises(ValueError):
        NoncentralChi2(-1.0, 3)


def test_cdf_decreases_in_noncentrality():
    values = [
        confball.distributions.noncentral_chi2_cdf(110.0,
                                                   NoncentralChi2(z, 100))
        for z in [0.0, 1.0, 5.0, 20.0, 50.0]
    ]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_moments():
    p = NoncentralChi2(7.0, 4)
    assert p.mean == 11.0
    assert p.variance == 2 * (4 + 2 * 7.0)


def test_quantile_inverts_cdf():
    for z in [0.0, 3.0, 100.0]:
        for d in [1, 5, 995]:
            p = NoncentralChi2(z, d)
            for u in [1e-4, 0.05, 0.5, 0.9]:
                q = confball.distributions.chi2_quantile(u, p)
                np.testing.assert_allclose(
                    confball.distributions.chi2_sf(q, p), u,
                    rtol=1e-8,
                )


def test_central_quantile():
    np.testing.assert_allclose(
        confball.distributions.chi2_quantile(0.2, NoncentralChi2(0.0, 995)),
        stats.chi2.isf(0.2, 995),
        rtol=1e-10,
    )


def test_quantile_conventions():
    p = NoncentralChi2(3.0, 4)
    assert confball.distributions.chi2_quantile(
        1.0, p, allow_one=True) == confball.distributions.NEG_INF
    with pytest.raises(confball.errors.DomainError):
        confball.distributions.chi2_quantile(1.0, p)
    with pytest.raises(confball.errors.DomainError):
        confball.distributions.chi2_quantile(0.0, p)
    assert confball.distributions.chi2_quantile(0.3, NoncentralChi2(3.0, 0)) \
        == 0.0


def test_quantile_sandwich():
    for z in SANDWICH_Z:
        for d in SANDWICH_D:
            p = NoncentralChi2(z, d)
            for u in SANDWICH_U:
                q = confball.distributions.chi2_quantile(u, p)
                assert q <= confball.distributions.birge_upper(z, d, u)
                assert q >= confball.distributions.birge_lower(z, d, 1 - u)


def test_sampling_moments():
    rng = np.random.default_rng(17)
    p = NoncentralChi2(10.0, 5)
    draws = confball.distributions.sample_noncentral(p, rng, size=200_000)
    se = math.sqrt(p.variance / draws.size)
    assert abs(draws.mean() - p.mean) < 4 * se
    assert isinstance(
        confball.distributions.sample_noncentral(p, rng), float)


@pytest.mark.slow
def test_cdf_against_monte_carlo():
    rng = np.random.default_rng(2024)
    size = 10**6
    for x, z, d in CDF_POINTS:
        p = NoncentralChi2(z, d)
        draws = confball.distributions.sample_noncentral(p, rng, size=size)
        estimate = np.mean(draws <= x)
        exact = confball.distributions.noncentral_chi2_cdf(x, p)
        se = math.sqrt(max(exact * (1 - exact), 0.0) / size)
        assert abs(estimate - exact) <= 3 * se + 1e-3
