import logging
import math
from typing import Iterator, Optional, Sequence

import numpy as np

from confball.bounds.combinatorics import log_binomial
from confball.errors import DomainError, PreconditionError
from confball.models.linear import LinearModel, full_model, orthonormalize
from confball.scope import check_probability

logger = logging.getLogger(__name__)

#: Absolute slack allowed in ``sum(beta_m) <= beta``.
LEVEL_SUM_TOL = 1e-12


class ModelFamily:
    """An ordered, immutable collection of linear models in ``R^n``
    containing exactly one full model ``S = R^n``.

    :param models: Models of the family. The order is kept and used to
        break ties when selecting a model.
    :type models: Sequence[LinearModel]
    :param beta: Global risk the allocated levels are checked against.
        No check is done if ``None``., defaults to None
    :type beta: float, optional
    :raises: DomainError if the family is inconsistent
    """

    def __init__(
        self,
        models: Sequence[LinearModel],
        beta: Optional[float] = None,
    ):
        self._models = tuple(models)
        if len(self._models) == 0:
            raise DomainError("A model family can't be empty")
        dims = {model.n for model in self._models}
        if len(dims) > 1:
            raise DomainError(f"Models live in different dimensions {dims}")
        ids = [model.model_id for model in self._models]
        if len(set(ids)) != len(ids):
            raise DomainError("Model ids have to be unique")
        full = [model for model in self._models if model.is_full]
        if len(full) != 1:
            raise PreconditionError(
                f"The family has to contain exactly one full model, "
                f"found {len(full)}"
            )
        self._full_id = full[0].model_id
        self._index = {model_id: i for i, model_id in enumerate(ids)}
        self._beta = None
        if beta is not None:
            self.validate(beta)
            self._beta = float(beta)

    @property
    def n(self) -> int:
        return self._models[0].n

    @property
    def beta(self) -> Optional[float]:
        """Global risk the family was validated against."""
        return self._beta

    @property
    def full_model_id(self) -> str:
        return self._full_id

    @property
    def models(self) -> tuple[LinearModel, ...]:
        return self._models

    def ids(self) -> list[str]:
        return [model.model_id for model in self._models]

    def dims(self) -> list[int]:
        return [model.D for model in self._models]

    def levels(self) -> list[float]:
        return [model.beta_m for model in self._models]

    def index(self, model_id: str) -> int:
        """Position of the model with the given id in the family."""
        try:
            return self._index[str(model_id)]
        except KeyError:
            raise DomainError(f"Unknown model {model_id!r}") from None

    def validate(self, beta: float) -> None:
        """Checks that the allocated risks sum up to at most ``beta``.

        :raises: PreconditionError otherwise
        """
        check_probability("beta", beta)
        total = math.fsum(self.levels())
        if total > beta + LEVEL_SUM_TOL:
            raise PreconditionError(
                f"sum(beta_m) <= beta is violated: {total!r} > {beta!r}"
            )

    def with_levels(
        self,
        levels: Sequence[float],
        beta: Optional[float] = None,
    ) -> "ModelFamily":
        """Returns the same family with new allocated risks.

        :rtype: ModelFamily
        """
        if len(levels) != len(self._models):
            raise DomainError(f"Expected {len(self._models)} levels, got "
                              f"{len(levels)}")
        return ModelFamily(
            [model.with_level(b) for model, b in zip(self._models, levels)],
            beta=beta,
        )

    def __getitem__(self, model_id: str) -> LinearModel:
        return self._models[self.index(model_id)]

    def __iter__(self) -> Iterator[LinearModel]:
        return iter(self._models)

    def __len__(self) -> int:
        return len(self._models)

    def __repr__(self) -> str:
        return (f"ModelFamily(n={self.n}, models={len(self)}, "
                f"dims={self.dims()})")


def allocate_uniform(beta: float, count: int) -> list[float]:
    """Splits ``beta`` into ``count`` equal parts ``beta / count``.
    The share is rounded down if the floating point sum would exceed
    ``beta``.

    :rtype: list[float]
    """
    check_probability("beta", beta)
    if count < 1:
        raise DomainError(f"count has to be at least 1, got {count}")
    share = beta / count
    while math.fsum([share] * count) > beta:
        share = math.nextafter(share, 0.0)
    return [share] * count


def allocate_dimensional(
    beta: float,
    n: int,
    dims: Sequence[int],
    include_full: bool = False,
) -> list[float]:
    """Allocates ``beta_m = beta / (n * C(n, D))`` to models of
    dimension ``D``, computed in log space. If ``include_full`` is
    set, one more entry ``beta / 2`` for the full model is appended.

    Summed over all subsets of at most ``n/2`` columns of a design
    with ``p <= n`` columns the levels don't exceed ``beta / 2``.

    :type beta: float
    :type n: int
    :param dims: Dimensions of the non-full models, each in
        ``[1, n/2]``.
    :type dims: Sequence[int]
    :type include_full: bool, optional
    :rtype: list[float]
    """
    check_probability("beta", beta)
    levels = []
    for D in dims:
        if not 1 <= D <= n / 2:
            raise DomainError(f"Dimension has to lie in [1, n/2], got "
                              f"D={D}, n={n}")
        levels.append(math.exp(math.log(beta) - math.log(n)
                               - log_binomial(n, D)))
    if include_full:
        levels.append(beta / 2.0)
    return levels


def uniform_family(
    n: int,
    beta: float,
    raw_bases: Sequence[np.ndarray],
    ids: Optional[Sequence[str]] = None,
) -> ModelFamily:
    """Builds a family from the spans of the given matrices plus the
    full model, every model getting the same level
    ``beta / (len(raw_bases) + 1)``.

    :type n: int
    :type beta: float
    :param raw_bases: Matrices of shape ``(n, k)``. Their columns are
        orthonormalized.
    :type raw_bases: Sequence[np.ndarray]
    :param ids: Labels of the models, ``"1", "2", ...`` by default.
        The full model is labelled ``str(n)``., defaults to None
    :type ids: Sequence[str], optional
    :rtype: ModelFamily
    """
    if ids is None:
        ids = [str(i + 1) for i in range(len(raw_bases))]
    levels = allocate_uniform(beta, len(raw_bases) + 1)
    models: list[LinearModel] = []
    for model_id, raw, level in zip(ids, raw_bases, levels):
        basis = orthonormalize(raw)
        if basis.shape[0] != n:
            raise DomainError(f"Basis {model_id!r} has {basis.shape[0]} "
                              f"rows, expected {n}")
        models.append(LinearModel(model_id, basis, level))
    models.append(full_model(n, levels[-1]))
    logger.debug("Built uniform family with %d models", len(models))
    return ModelFamily(models, beta=beta)
