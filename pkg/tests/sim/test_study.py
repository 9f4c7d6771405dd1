import math

import numpy as np
import pytest

import confball
from confball.radii import Interval, Known

SMALL = dict(n=128, K=3, replicates=20, seed=5)


def test_smallest_accepted_noiseless():
    family = confball.models.fourier_family(1000, 8)
    for name, expected in [("F1", "2"), ("F2", "16")]:
        f = confball.sim.test_function(name, 1000)
        assert confball.sim.smallest_accepted(
            f, family, 0.2, Known(1e-8)) == expected


def test_table_shape():
    config = confball.sim.SimulationConfig(**SMALL)
    report = confball.sim.run_table1(config)
    assert list(report.table.columns) == ["m", "D", "rho_sq_over_n", "F1",
                                          "F2", "F3"]
    assert list(report.table["m"]) == ["2", "4", "8", "128"]
    for name in ["F1", "F2", "F3"]:
        assert report.table[name].sum() == config.replicates
    assert len(report.records) == 3 * config.replicates
    assert len(report.records_frame()) == 3 * config.replicates
    assert set(report.summary()["coverage"]) == {"F1", "F2", "F3"}
    record = report.records[0]
    assert len(record.within) == 4
    assert record.within[-1]


def test_report_does_not_depend_on_threads():
    serial = confball.sim.run_table1(
        confball.sim.SimulationConfig(threads=1, **SMALL))
    parallel = confball.sim.run_table1(
        confball.sim.SimulationConfig(threads=4, **SMALL))
    assert serial.table.equals(parallel.table)
    assert serial.records == parallel.records


def test_custom_function():
    n = 128
    config = confball.sim.SimulationConfig(
        functions=(), custom=np.zeros(n), **SMALL)
    report = confball.sim.run_table1(config)
    assert list(report.table.columns)[-1] == "custom"
    assert report.coverage("custom") >= 0


def test_invalid_config():
    with pytest.raises(confball.errors.DomainError):
        confball.sim.SimulationConfig(replicates=0)
    with pytest.raises(confball.errors.PreconditionError):
        confball.sim.SimulationConfig(alpha=0.95)


def test_single_replicate_coverage():
    family = confball.models.fourier_family(64, 2)
    result = confball.sim.coverage_mc(np.zeros(64), family, 0.2, Known(1.0),
                                      replicates=1, seed=0)
    assert result["coverage"] in (0.0, 1.0)
    assert result["replicates"] == 1


def test_alpha_sensitivity():
    frame = confball.sim.alpha_sensitivity([0.2, 0.15, 0.10])
    np.testing.assert_allclose(frame["rho_sq_over_n"],
                               [0.118, 0.149, 0.160], atol=0.003)


@pytest.mark.slow
def test_table1_radii_and_counts():
    report = confball.sim.run_table1(
        confball.sim.SimulationConfig(replicates=100, seed=2))
    np.testing.assert_allclose(
        report.table["rho_sq_over_n"],
        [0.118, 0.136, 0.155, 0.181, 0.222, 0.293, 0.425, 0.681, 1.157],
        atol=0.003,
    )
    assert 70 <= report.table["F1"].iloc[0] <= 90


@pytest.mark.slow
def test_coverage():
    family = confball.models.fourier_family(1000, 8)
    for name in confball.sim.FUNCTIONS:
        f = confball.sim.test_function(name, 1000)
        result = confball.sim.coverage_mc(f, family, 0.2, Known(1.0),
                                          replicates=1000, seed=13)
        assert result["coverage"] >= 0.8755
        assert result["intersection_coverage"] <= result["coverage"]
        assert result["ci_low"] <= result["coverage"]


@pytest.mark.slow
def test_coverage_with_variance_interval():
    family = confball.models.fourier_family(1000, 8)
    f = confball.sim.test_function("F3", 1000)
    result = confball.sim.coverage_mc(f, family, 0.2, Interval(1.2, 0.25),
                                      replicates=1000, seed=21, sigma2=1.0)
    assert result["coverage"] >= 0.8755


@pytest.mark.slow
def test_radius_guarantee_for_nested_target():
    family = confball.models.fourier_family(1000, 8)
    replicates = 10**4
    f = confball.sim.test_function("F1", 1000)
    builder = confball.core.BallBuilder(family, 0.2, Known(1.0))
    rng = np.random.default_rng(99)
    accepted = 0
    within = 0
    rho_2 = builder.radii()[0]
    for _ in range(replicates):
        ball = builder.build(confball.sim.gen_data(f, 1.0, rng))
        accepted += ball.per_model[0].accepted
        within += ball.radius_sq <= rho_2 + 1e-9
    assert abs(accepted / replicates - 0.8) <= 0.012
    assert within / replicates >= 0.8 - 0.012


@pytest.mark.slow
def test_f2_radius_against_its_model():
    report = confball.sim.run_table1(confball.sim.SimulationConfig(
        replicates=1000, seed=8, functions=("F2",)))
    index = report.config.family().index("16")
    within = np.mean([r.within[index] for r in report.records])
    assert within >= 0.8 - 3 * math.sqrt(0.16 / 1000)
