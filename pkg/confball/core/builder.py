import json
import logging
import os
from abc import ABC, abstractmethod
from typing import Any, Optional, Union

import numpy as np

from confball.errors import DomainError
from confball.io import load_matrix_csv
from confball.models.family import (
    ModelFamily,
    allocate_dimensional,
    allocate_uniform,
)
from confball.models.fourier import fourier_design, fourier_family
from confball.models.linear import LinearModel, full_model, orthonormalize

logger = logging.getLogger(__name__)

ALLOCATIONS = ("uniform", "dimensional", "explicit")
BASIS_SOURCES = ("fourier", "columns-csv", "subset", "zero", "full")


class FamilyBuilder(ABC):
    """Abstract class that is inherited by classes which are building
    :class:`~confball.models.family.ModelFamily` objects from a
    configuration.
    """

    @abstractmethod
    def build(self, config: dict[str, Any]) -> ModelFamily:
        """Builds a family based on the given configuration.

        :type config: dict[str, Any]
        :rtype: ModelFamily
        """


class FourierFamilyBuilder(FamilyBuilder):
    """Builds the nested dyadic trigonometric family. Reads the keys
    ``n``, ``K`` (default 8) and ``beta`` (default 0.1).
    """

    def build(self, config: dict[str, Any]) -> ModelFamily:
        return fourier_family(int(config["n"]), int(config.get("K", 8)),
                              float(config.get("beta", 0.1)))


class ConfigFamilyBuilder(FamilyBuilder):
    """Builds a family from an explicit list of models.

    Each entry of ``config["models"]`` has an ``id``, a
    ``basis_source`` and depending on the source:

    - ``"fourier"``: ``m``, the number of frequencies,
    - ``"columns-csv"``: ``path`` of a CSV file whose columns span the
      model and optionally ``columns``, a list of 0-based indices,
    - ``"subset"``: ``columns`` of the design matrix given by
      ``config["design"]``,
    - ``"zero"``: nothing,
    - ``"full"``: nothing, the full model. It is appended automatically
      if missing.

    ``config["allocation"]`` is one of ``"uniform"``,
    ``"dimensional"`` or ``"explicit"``. Explicit allocations read
    ``beta_m`` of every entry (for an implicit full model from
    ``config["full_beta"]``).

    :param base_dir: Directory relative paths are resolved against.,
        defaults to None
    :type base_dir: str, optional
    """

    def __init__(self, base_dir: Optional[str] = None):
        self._base_dir = base_dir

    def _path(self, path: str) -> str:
        if self._base_dir is None or os.path.isabs(path):
            return path
        return os.path.join(self._base_dir, path)

    def _raw_basis(
        self,
        entry: dict[str, Any],
        n: int,
        design: Optional[np.ndarray],
    ) -> Optional[np.ndarray]:
        source = entry.get("basis_source")
        if source == "fourier":
            return fourier_design(n, int(entry["m"]))
        if source == "columns-csv":
            matrix = load_matrix_csv(self._path(entry["path"]))
            if "columns" in entry:
                matrix = matrix[:, list(entry["columns"])]
            return matrix
        if source == "subset":
            if design is None:
                raise DomainError("basis_source 'subset' needs a 'design'")
            return design[:, list(entry["columns"])]
        if source == "zero":
            return np.zeros((n, 0))
        if source == "full":
            return None
        raise DomainError(f"Unknown basis_source {source!r}, expected one "
                          f"of {BASIS_SOURCES}")

    def build(self, config: dict[str, Any]) -> ModelFamily:
        n = int(config["n"])
        beta = float(config["beta"])
        allocation = config.get("allocation", "uniform")
        if allocation not in ALLOCATIONS:
            raise DomainError(f"Unknown allocation {allocation!r}, expected "
                              f"one of {ALLOCATIONS}")
        design = None
        if "design" in config:
            design = load_matrix_csv(self._path(config["design"]))
        entries = list(config.get("models", []))
        bases: list[Optional[np.ndarray]] = []
        for entry in entries:
            raw = self._raw_basis(entry, n, design)
            if raw is not None and raw.shape[0] != n:
                raise DomainError(f"Model {entry.get('id')!r} has "
                                  f"{raw.shape[0]} rows, expected {n}")
            bases.append(None if raw is None else orthonormalize(raw))
        if not any(basis is None for basis in bases):
            entries.append({"id": str(n), "basis_source": "full",
                            "beta_m": config.get("full_beta")})
            bases.append(None)

        if allocation == "uniform":
            levels = allocate_uniform(beta, len(entries))
        elif allocation == "dimensional":
            dims = [basis.shape[1] for basis in bases if basis is not None]
            partial = iter(allocate_dimensional(beta, n, dims))
            levels = [beta / 2.0 if basis is None else next(partial)
                      for basis in bases]
        else:
            levels = [entry.get("beta_m") for entry in entries]
            if any(level is None for level in levels):
                raise DomainError("Explicit allocation needs beta_m for "
                                  "every model")

        models = []
        for entry, basis, level in zip(entries, bases, levels):
            model_id = str(entry.get("id", len(models) + 1))
            if basis is None:
                models.append(full_model(n, float(level), model_id))
            else:
                support = None
                if entry.get("basis_source") == "subset":
                    support = tuple(int(c) for c in entry["columns"])
                models.append(LinearModel(model_id, basis, float(level),
                                          support))
        logger.debug("Built family of %d models from config", len(models))
        return ModelFamily(models, beta=beta)


def load_config(path: str) -> dict[str, Any]:
    """Reads a JSON family configuration."""
    with open(path, "r", encoding="utf-8") as file:
        config = json.load(file)
    if not isinstance(config, dict):
        raise DomainError(f"Family configuration {path!r} is not an object")
    return config


def build_family(
    config: Union[dict[str, Any], str, os.PathLike],
) -> ModelFamily:
    """Returns the model family described by the given configuration,
    either a dictionary or the path of a JSON file.

    A configuration with ``"preset": "fourier_dyadic"`` builds the
    trigonometric family of :meth:`~confball.models.fourier.fourier_family`,
    any other is handled by :class:`ConfigFamilyBuilder`.

    :type config: dict[str, Any] | str
    :rtype: ModelFamily
    """
    base_dir = None
    if not isinstance(config, dict):
        path = os.fspath(config)
        base_dir = os.path.dirname(os.path.abspath(path))
        config = load_config(path)
    preset = config.get("preset")
    if preset == "fourier_dyadic":
        builder: FamilyBuilder = FourierFamilyBuilder()
    elif preset is None:
        builder = ConfigFamilyBuilder(base_dir)
    else:
        raise DomainError(f"Unknown preset {preset!r}")
    try:
        return builder.build(config)
    except KeyError as error:
        raise DomainError(f"Family configuration misses the key "
                          f"{error.args[0]!r}") from None
