import numpy as np
import pytest

import confball


def test_function_values():
    np.testing.assert_allclose(confball.sim.functions.f1(np.array([0.25])),
                               0.0, atol=1e-15)
    np.testing.assert_allclose(
        confball.sim.functions.f3(np.array([0.5, 0.7, 0.9, 0.1])),
        [0.5, 2.0, 0.0, 1.5],
    )
    x = np.linspace(0, 1, 100_001)
    difference = confball.sim.functions.f2(x) - confball.sim.functions.f1(x)
    np.testing.assert_allclose(np.max(np.abs(difference)), 0.3, rtol=1e-6)


def test_function_at_design_points():
    f = confball.sim.test_function("F1", 8)
    np.testing.assert_allclose(f, np.cos(2 * np.pi * np.arange(1, 9) / 8))
    assert confball.sim.test_function("f3", 10)[-1] == 0.0
    with pytest.raises(confball.errors.DomainError):
        confball.sim.test_function("F4", 10)


def test_gen_data():
    f = confball.sim.test_function("F2", 50)
    y = confball.sim.gen_data(f, 1e-12, np.random.default_rng(0))
    np.testing.assert_allclose(y, f, atol=1e-9)
    first = confball.sim.gen_data(f, 1.0, np.random.default_rng(42))
    second = confball.sim.gen_data(f, 1.0, np.random.default_rng(42))
    np.testing.assert_array_equal(first, second)
    with pytest.raises(confball.errors.DomainError):
        confball.sim.gen_data(f, 0.0, np.random.default_rng(0))


def test_noise_energy():
    rng = np.random.default_rng(1)
    n = 1000
    energies = [np.sum(confball.sim.gen_data(np.zeros(n), 1.0, rng)**2) / n
                for _ in range(1000)]
    assert abs(np.mean(energies) - 1.0) < 0.01


def test_figure_data():
    frame = confball.sim.figure_data("F3", n=20, sigma=0.5, seed=3)
    assert list(frame.columns) == ["x", "F", "y"]
    assert len(frame) == 20
    np.testing.assert_allclose(frame["x"], np.arange(1, 21) / 20)
    again = confball.sim.figure_data("F3", n=20, sigma=0.5, seed=3)
    np.testing.assert_array_equal(frame["y"], again["y"])
