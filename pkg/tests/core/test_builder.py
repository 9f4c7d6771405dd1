import json

import numpy as np
import pytest

import confball


def test_preset():
    family = confball.core.build_family(
        {"preset": "fourier_dyadic", "n": 200, "K": 4, "beta": 0.1})
    assert family.dims() == [5, 9, 17, 33, 200]


def test_uniform_config():
    family = confball.core.build_family({
        "n": 50,
        "beta": 0.1,
        "allocation": "uniform",
        "models": [
            {"id": "zero", "basis_source": "zero"},
            {"id": "f2", "basis_source": "fourier", "m": 2},
        ],
    })
    assert family.ids() == ["zero", "f2", "50"]
    assert family.dims() == [0, 5, 50]
    np.testing.assert_allclose(family.levels(), [0.1 / 3] * 3, rtol=1e-15)


def test_explicit_config():
    family = confball.core.build_family({
        "n": 50,
        "beta": 0.1,
        "allocation": "explicit",
        "models": [
            {"id": "f1", "basis_source": "fourier", "m": 1, "beta_m": 0.05},
            {"id": "all", "basis_source": "full", "beta_m": 0.05},
        ],
    })
    assert family.full_model_id == "all"
    with pytest.raises(confball.errors.DomainError):
        confball.core.build_family({
            "n": 50, "beta": 0.1, "allocation": "explicit",
            "models": [{"id": "f1", "basis_source": "fourier", "m": 1}],
        })


def test_csv_config(tmp_path):
    rng = np.random.default_rng(0)
    X = rng.normal(size=(30, 3))
    np.savetxt(tmp_path / "design.csv", X, delimiter=",")
    config = {
        "n": 30,
        "beta": 0.1,
        "allocation": "dimensional",
        "design": "design.csv",
        "models": [
            {"id": "x1", "basis_source": "subset", "columns": [0]},
            {"id": "x23", "basis_source": "subset", "columns": [1, 2]},
            {"id": "cols", "basis_source": "columns-csv",
             "path": "design.csv", "columns": [0, 1]},
        ],
    }
    with open(tmp_path / "family.json", "w") as file:
        json.dump(config, file)
    family = confball.core.build_family(str(tmp_path / "family.json"))
    assert family.dims() == [1, 2, 2, 30]
    assert family["x23"].support == (1, 2)
    assert family.levels()[-1] == 0.05


def test_invalid_configs():
    with pytest.raises(confball.errors.DomainError):
        confball.core.build_family({"n": 10, "beta": 0.1,
                                    "models": [{"basis_source": "wavelet"}]})
    with pytest.raises(confball.errors.DomainError):
        confball.core.build_family({"beta": 0.1})
    with pytest.raises(confball.errors.DomainError):
        confball.core.build_family({"preset": "unknown"})
