import math

import numpy as np
import pytest

import confball
from confball.radii import Known, RadiusInputs

N_OBS = 100
P = 8
RNG = np.random.default_rng(11)
DESIGN = np.linalg.qr(RNG.normal(size=(N_OBS, P)))[0]


def test_enumeration_counts():
    X = confball.varselect.DesignMatrix(DESIGN[:, :3])
    family = confball.varselect.enumerate_models(X, 1, 0.1)
    assert len(family) == 4
    assert family.ids() == ["{1}", "{2}", "{3}", str(N_OBS)]
    family = confball.varselect.enumerate_models(DESIGN[:, :4], 2, 0.1)
    assert len(family) == 11
    assert math.fsum(family.levels()) <= 0.1
    assert confball.varselect.per_size_counts(family) == {1: 4, 2: 6}
    assert family["{2,4}"].support == (2, 4)


def test_enumeration_cap():
    X = np.linalg.qr(RNG.normal(size=(N_OBS, 20)))[0]
    with pytest.raises(confball.errors.EnumerationCapError):
        confball.varselect.enumerate_models(X, 10, 0.1, cap=10**4)


def test_design_validation():
    with pytest.raises(confball.errors.DimensionError):
        confball.varselect.DesignMatrix(np.ones((3, 5)))
    with pytest.raises(confball.errors.DimensionError):
        confball.varselect.DesignMatrix(
            np.column_stack([DESIGN[:, 0], DESIGN[:, 0]]))
    with pytest.raises(confball.errors.DomainError):
        confball.varselect.enumerate_models(DESIGN, 51, 0.1)


def test_levels_decrease_with_size():
    family = confball.varselect.enumerate_models(DESIGN, 3, 0.1)
    by_size = {}
    for model in family:
        if model.support is not None:
            by_size[len(model.support)] = model.beta_m
    assert by_size[1] > by_size[2] > by_size[3]
    assert family[str(N_OBS)].beta_m == 0.05


def test_uniform_allocation():
    family = confball.varselect.enumerate_models(DESIGN[:, :4], 2, 0.1,
                                                 allocation="uniform")
    np.testing.assert_allclose(family.levels(), [0.1 / 11] * 11, rtol=1e-15)


def test_noiseless_selection():
    U = np.zeros(P)
    U[[0, 2]] = [3.0, -2.0]
    y = DESIGN @ U
    selection = confball.varselect.select_variables(
        y, DESIGN, 0.2, 0.1, Known(1e-8), max_size=3)
    assert selection.columns == (1, 3)
    assert selection.ball.selected == "{1,3}"


def test_full_model_selection_has_no_columns():
    y = 100 * RNG.normal(size=N_OBS)
    selection = confball.varselect.select_variables(
        y, DESIGN, 0.2, 0.1, Known(1.0), max_size=2)
    assert selection.columns is None
    assert selection.ball.selected == str(N_OBS)


def test_selection_radius_bound():
    values = [confball.varselect.selection_radius_bound(N_OBS, s, 0.2, 0.1,
                                                        1.0)
              for s in range(1, N_OBS // 2 + 1)]
    assert all(b >= a for a, b in zip(values, values[1:]))
    n, s = 1000, 5
    beta_m = 0.1 / (n * math.comb(n, s))
    bound = confball.varselect.selection_radius_bound(n, s, 0.2, 0.1, 1.0)
    rho_sq = confball.radii.rho_sq_known(
        RadiusInputs(s, n - s, 0.2, beta_m, Known(1.0)))
    assert np.isfinite(bound)
    assert bound >= rho_sq
    with pytest.raises(confball.errors.DomainError):
        confball.varselect.selection_radius_bound(10, 6, 0.2, 0.1, 1.0)


@pytest.mark.slow
def test_selection_frequency():
    # the true support is accepted with probability 1 - alpha, so the
    # selection rate can only reach 95% at a small test level
    alpha, beta = 0.02, 0.1
    U = np.zeros(P)
    U[[1, 5]] = [25.0, 25.0]
    f = DESIGN @ U
    selector = confball.varselect.VariableSelector(DESIGN, alpha, beta,
                                                   Known(1.0), max_size=4)
    target = selector.family["{2,6}"]
    rho_target = selector.builder.radii()[
        selector.family.index(target.model_id)]
    rng = np.random.default_rng(7)
    replicates = 500
    exact = 0
    within = 0
    for _ in range(replicates):
        selection = selector.select(confball.sim.gen_data(f, 1.0, rng))
        exact += selection.columns == (2, 6)
        within += selection.ball.radius_sq <= rho_target + 1e-9
    se = math.sqrt(alpha * (1 - alpha) / replicates)
    assert exact / replicates >= 0.95
    assert within / replicates >= 1 - alpha - 3 * se
