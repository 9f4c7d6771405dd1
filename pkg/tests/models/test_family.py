import math

import numpy as np
import pytest

import confball

N_OBS = 1000


def test_allocate_uniform():
    levels = confball.models.allocate_uniform(0.1, 9)
    assert len(levels) == 9
    np.testing.assert_allclose(levels, [0.1 / 9] * 9, rtol=1e-15)
    assert math.fsum(levels) <= 0.1
    assert confball.models.allocate_uniform(0.1, 1) == [0.1]
    with pytest.raises(confball.errors.DomainError):
        confball.models.allocate_uniform(0.1, 0)


def test_allocate_dimensional():
    levels = confball.models.allocate_dimensional(0.1, 4, [1, 1, 1, 1],
                                                  include_full=True)
    np.testing.assert_allclose(levels[:4], [0.00625] * 4, rtol=1e-12)
    assert levels[4] == 0.05
    np.testing.assert_allclose(math.fsum(levels), 0.075, rtol=1e-12)
    level = confball.models.allocate_dimensional(0.1, 1000, [5])[0]
    np.testing.assert_allclose(level, 0.1 / (1000 * math.comb(1000, 5)),
                               rtol=1e-10)
    with pytest.raises(confball.errors.DomainError):
        confball.models.allocate_dimensional(0.1, 10, [6])


def test_dimensional_levels_decrease():
    levels = confball.models.allocate_dimensional(0.1, 100,
                                                  list(range(1, 51)))
    assert all(a > b for a, b in zip(levels, levels[1:]))


def test_fourier_family():
    family = confball.models.fourier_family(N_OBS, 8)
    assert family.dims() == [5, 9, 17, 33, 65, 129, 257, 513, 1000]
    assert family.ids() == ["2", "4", "8", "16", "32", "64", "128", "256",
                            "1000"]
    expected = [0.1 * 2.0**-k for k in range(1, 9)] + [0.1 * 2.0**-8]
    np.testing.assert_allclose(family.levels(), expected, rtol=1e-15)
    np.testing.assert_allclose(math.fsum(family.levels()), 0.1, rtol=1e-15)
    assert family.full_model_id == "1000"
    assert family.beta == 0.1


def test_fourier_family_is_nested():
    family = confball.models.fourier_family(200, 4)
    models = family.models
    for small, large in zip(models[:-2], models[1:-1]):
        np.testing.assert_allclose(large.project(small.basis[:, 0]),
                                   small.basis[:, 0], atol=1e-8)
        np.testing.assert_allclose(large.project(small.basis[:, -1]),
                                   small.basis[:, -1], atol=1e-8)


def test_fourier_family_is_deterministic():
    first = confball.models.fourier_family(100, 3)
    second = confball.models.fourier_family(100, 3)
    for a, b in zip(first, second):
        np.testing.assert_array_equal(a.basis, b.basis)


def test_fourier_family_precondition():
    with pytest.raises(confball.errors.PreconditionError):
        confball.models.fourier_family(33, 4)


def test_fourier_design():
    design = confball.models.fourier_design(8, 1)
    x = np.arange(1, 9) / 8
    np.testing.assert_allclose(design[:, 0], 1.0)
    np.testing.assert_allclose(design[:, 1], np.cos(2 * np.pi * x))
    np.testing.assert_allclose(design[:, 2], np.sin(2 * np.pi * x))


def test_family_validation():
    zero = confball.models.zero_model(5, 0.05)
    full = confball.models.full_model(5, 0.05)
    with pytest.raises(confball.errors.PreconditionError):
        confball.models.ModelFamily([zero])
    with pytest.raises(confball.errors.PreconditionError):
        confball.models.ModelFamily([zero, full], beta=0.09)
    with pytest.raises(confball.errors.DomainError):
        confball.models.ModelFamily([zero, full,
                                     confball.models.zero_model(5, 0.01)])
    family = confball.models.ModelFamily([zero, full], beta=0.1)
    assert len(family) == 2
    assert family["0"] is zero
    assert family.index("5") == 1
    with pytest.raises(confball.errors.DomainError):
        family["7"]
    relevelled = family.with_levels([0.02, 0.03], beta=0.05)
    assert relevelled.levels() == [0.02, 0.03]


def test_uniform_family():
    rng = np.random.default_rng(0)
    bases = [rng.normal(size=(20, 2)), rng.normal(size=(20, 4))]
    family = confball.models.uniform_family(20, 0.09, bases)
    assert family.dims() == [2, 4, 20]
    np.testing.assert_allclose(family.levels(), [0.03] * 3, rtol=1e-15)
