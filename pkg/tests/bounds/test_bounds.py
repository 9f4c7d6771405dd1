import math

import numpy as np
import pytest

import confball
from confball.radii import Interval, Known, RadiusInputs

STRICT_ALPHA = 0.01
STRICT_BETA = 0.005


def test_upper_bound_full_model():
    beta_n = 0.1 * 2.0**-8
    L = math.log(1 / beta_n)
    bound = confball.bounds.upper_bound_rho(1000, 0, 0.0, 0.2, beta_n, 1.0)
    np.testing.assert_allclose(
        bound, 1000 + 2 * math.sqrt(1000 * L) + 2 * L, rtol=1e-12)
    rho_sq = confball.radii.rho_sq_known(
        RadiusInputs(1000, 0, 0.2, beta_n, Known(1.0)))
    assert bound >= rho_sq


def test_upper_bound_model():
    bound = confball.bounds.upper_bound_rho(5, 995, 0.0, 0.2, 0.05, 1.0)
    expected = (5 + 2 * math.sqrt(995) * (3 * math.sqrt(math.log(20))
                                          + 2 * math.sqrt(math.log(5)))
                + 2 * (5 * math.log(20) + 2 * math.log(5)))
    np.testing.assert_allclose(bound, expected, rtol=1e-12)
    rho_sq = confball.radii.rho_sq_known(
        RadiusInputs(5, 995, 0.2, 0.05, Known(1.0)))
    assert bound >= rho_sq


def test_upper_bound_zero_model():
    L_m, L_a = math.log(1 / 0.05), math.log(1 / 0.2)
    bound = confball.bounds.upper_bound_rho(0, 1000, 0.1, 0.2, 0.05, 2.0)
    expected = (2 * 1000 * 0.1
                + 4 * math.sqrt(1000) * (math.sqrt(L_m) + math.sqrt(L_a))
                + 8 * L_m + 4 * L_a) * 2.0
    np.testing.assert_allclose(bound, expected, rtol=1e-12)


def test_upper_bound_monotone():
    base = confball.bounds.upper_bound_rho(10, 500, 0.01, 0.2, 0.05, 1.0)
    assert confball.bounds.upper_bound_rho(10, 500, 0.05, 0.2, 0.05, 1.0) \
        >= base
    assert confball.bounds.upper_bound_rho(20, 500, 0.01, 0.2, 0.05, 1.0) \
        >= base
    assert confball.bounds.upper_bound_rho(10, 500, 0.01, 0.2, 0.01, 1.0) \
        >= base
    assert confball.bounds.upper_bound_rho(10, 500, 0.01, 0.1, 0.05, 1.0) \
        >= base


def test_upper_bound_warns_for_large_models():
    with pytest.warns(UserWarning):
        confball.bounds.upper_bound_rho(600, 400, 0.0, 0.2, 0.05, 1.0)


def test_bound_constants():
    constants = confball.bounds.BoundConstants.from_levels(0.2, 0.1, 0.05)
    np.testing.assert_allclose(constants.L_m, math.log(20))
    np.testing.assert_allclose(constants.L_alpha, math.log(5))
    np.testing.assert_allclose(constants.L1, -4 * math.log(0.7) / 81)
    np.testing.assert_allclose(constants.L2, 2 * math.log(1 + 4 * 0.6**2))
    np.testing.assert_allclose(constants.L3, -math.log(0.6))
    assert confball.bounds.BoundConstants.from_levels(0.5, 0.3).L2 is None


def test_lower_bound_needs_small_levels():
    with pytest.raises(confball.errors.PreconditionError):
        confball.bounds.lower_bound_radius(5, 995, 0.0, 0.2, 0.1, 1.0)


def test_lower_bound_branches():
    constants = confball.bounds.BoundConstants.from_levels(STRICT_ALPHA,
                                                           STRICT_BETA)
    value = confball.bounds.lower_bound_radius(
        5, 995, 0.0, STRICT_ALPHA, STRICT_BETA, 1.0)
    np.testing.assert_allclose(value, math.sqrt(constants.L2 * 995) / 9)
    # only the residual branches apply
    value = confball.bounds.lower_bound_radius(5000, 995, 0.0, 0.02, 0.05,
                                               1.0)
    np.testing.assert_allclose(
        value,
        math.sqrt(confball.bounds.BoundConstants.from_levels(
            0.02, 0.05).L2 * 995) / 9,
    )
    # a single dimension, no residual
    np.testing.assert_allclose(
        confball.bounds.lower_bound_radius(1, 0, 0.0, STRICT_ALPHA,
                                           STRICT_BETA, 1.0),
        1 / 27 - math.sqrt(constants.L1),
    )


def test_global_lower_bound_scaling():
    small = confball.bounds.global_lower_bound(10**4, 0.0, 1.0, STRICT_ALPHA,
                                               STRICT_BETA)
    large = confball.bounds.global_lower_bound(4 * 10**4, 0.0, 1.0,
                                               STRICT_ALPHA, STRICT_BETA)
    np.testing.assert_allclose(large, 2 * small, rtol=1e-12)
    assert confball.bounds.global_lower_bound(1, 0.0, 1.0, STRICT_ALPHA,
                                              STRICT_BETA) >= 0


def test_global_lower_bound_width_branch():
    constants = confball.bounds.BoundConstants.from_levels(STRICT_ALPHA,
                                                           STRICT_BETA)
    eta = 0.1

    def gap(n):
        return ((n - 2 * math.sqrt(constants.L3 * n)) * eta
                - math.sqrt(constants.L2 * n))

    crossover = 1
    while gap(crossover) <= 0:
        crossover *= 2
    n = 4 * crossover
    np.testing.assert_allclose(
        confball.bounds.global_lower_bound(n, eta, 1.0, STRICT_ALPHA,
                                           STRICT_BETA),
        (n - 2 * math.sqrt(constants.L3 * n)) * eta / 9,
    )


def test_sandwich():
    solver = confball.radii.RadiusSolver(grid_size=128, sigma_grid_size=16)
    n = 1000
    for D in [0, 5, 50]:
        for eta in [0.0, 0.01, 0.05]:
            variance = Interval(1.0, eta)
            rho_sq = solver.rho_sq_interval(RadiusInputs(
                D, n - D, STRICT_ALPHA, STRICT_BETA, variance))
            lower = confball.bounds.lower_bound_radius(
                D, n - D, eta, STRICT_ALPHA, STRICT_BETA, 1.0)
            upper = confball.bounds.upper_bound_rho(
                D, n - D, eta, STRICT_ALPHA, STRICT_BETA, 1.0)
            assert lower <= rho_sq <= upper


def test_subset_count_bound():
    np.testing.assert_allclose(confball.bounds.subset_count_bound(50, 1),
                               math.e * 50)
    assert confball.bounds.subset_count_bound(30, 30) >= 1
    exact = math.exp(confball.bounds.log_binomial(1000, 5))
    np.testing.assert_allclose(exact, math.comb(1000, 5), rtol=1e-10)
    assert confball.bounds.subset_count_bound(1000, 5) >= exact
    for n in [1, 2, 7, 100, 1000, 2000]:
        for D in range(1, n + 1):
            assert confball.bounds.log_subset_count_bound(n, D) \
                >= confball.bounds.log_binomial(n, D) - 1e-9
    with pytest.raises(confball.errors.DomainError):
        confball.bounds.subset_count_bound(5, 0)
