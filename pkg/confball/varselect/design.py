import itertools
import logging
import math
from collections import Counter

import numpy as np

from confball.errors import DimensionError, DomainError, EnumerationCapError
from confball.models.family import (
    ModelFamily,
    allocate_dimensional,
    allocate_uniform,
)
from confball.models.linear import LinearModel, full_model, orthonormalize
from confball.scope import check_probability

logger = logging.getLogger(__name__)

#: Default maximal number of enumerated subsets.
ENUMERATION_CAP = 10**6


class DesignMatrix:
    """Design matrix ``X`` of shape ``(n, p)`` with ``p <= n`` linearly
    independent columns, labelled ``1, ..., p``.

    :param X: Two dimensional array.
    :type X: np.ndarray
    :raises: DimensionError if ``X`` has more columns than rows or is
        not of full column rank
    """

    def __init__(self, X: np.ndarray):
        X = np.array(X, dtype=np.float64)
        if X.ndim != 2:
            raise DimensionError(f"Design has to be a matrix, got shape "
                                 f"{X.shape}")
        n, p = X.shape
        if p < 1 or p > n:
            raise DimensionError(f"Design needs 1 <= p <= n, got shape "
                                 f"{X.shape}")
        if not np.all(np.isfinite(X)):
            raise DomainError("Design contains non-finite values")
        rank = orthonormalize(X).shape[1]
        if rank < p:
            raise DimensionError(f"Design has rank {rank} < p = {p}")
        X.setflags(write=False)
        self._X = X

    @property
    def X(self) -> np.ndarray:
        return self._X

    @property
    def n(self) -> int:
        return self._X.shape[0]

    @property
    def p(self) -> int:
        return self._X.shape[1]

    def columns(self, labels: tuple[int, ...]) -> np.ndarray:
        """Columns with the given 1-based labels."""
        return self._X[:, [label - 1 for label in labels]]


def subset_id(labels: tuple[int, ...]) -> str:
    """Model id of a subset of column labels, e.g. ``"{1,3}"``."""
    return "{" + ",".join(str(label) for label in labels) + "}"


def enumeration_count(p: int, max_size: int) -> int:
    """Number of nonempty subsets of ``p`` columns with at most
    ``max_size`` elements.
    """
    return sum(math.comb(p, k) for k in range(1, max_size + 1))


def enumerate_models(
    X: DesignMatrix,
    max_size: int,
    beta: float,
    cap: int = ENUMERATION_CAP,
    allocation: str = "dimensional",
) -> ModelFamily:
    """Returns the family of spans of all nonempty column subsets of
    size at most ``max_size`` plus the full model, ordered by subset
    size and then lexicographically.

    With ``"dimensional"`` allocation a subset of size ``D`` gets the
    risk ``beta / (n * C(n, D))`` and the full model ``beta / 2``, with
    ``"uniform"`` allocation all models get the same share of
    ``beta``.

    :type X: DesignMatrix
    :param max_size: Largest subset size, at most ``min(p, n/2)``.
    :type max_size: int
    :type beta: float
    :param cap: Largest number of subsets to enumerate., defaults to
        ENUMERATION_CAP
    :type cap: int, optional
    :param allocation: ``"dimensional"`` or ``"uniform"``., defaults to
        "dimensional"
    :type allocation: str, optional
    :rtype: ModelFamily
    :raises: EnumerationCapError if there are more than ``cap``
        subsets
    """
    if not isinstance(X, DesignMatrix):
        X = DesignMatrix(X)
    check_probability("beta", beta)
    n, p = X.n, X.p
    if not 1 <= max_size <= min(p, n / 2):
        raise DomainError(f"max_size has to lie in [1, min(p, n/2)], got "
                          f"{max_size} (p={p}, n={n})")
    count = enumeration_count(p, max_size)
    if count > cap:
        raise EnumerationCapError(
            f"{count} subsets exceed the cap of {cap}, use a smaller "
            f"max_size or fewer columns"
        )
    subsets = [labels for size in range(1, max_size + 1)
               for labels in itertools.combinations(range(1, p + 1), size)]
    if allocation == "dimensional":
        levels = allocate_dimensional(beta, n, [len(s) for s in subsets],
                                      include_full=True)
    elif allocation == "uniform":
        levels = allocate_uniform(beta, len(subsets) + 1)
    else:
        raise DomainError(f"Unknown allocation {allocation!r}")
    models = [
        LinearModel(subset_id(labels), orthonormalize(X.columns(labels)),
                    level, support=labels)
        for labels, level in zip(subsets, levels)
    ]
    models.append(full_model(n, levels[-1]))
    logger.debug("Enumerated %d subsets of %d columns", count, p)
    return ModelFamily(models, beta=beta)


def per_size_counts(family: ModelFamily) -> dict[int, int]:
    """Number of models of each subset size, the full model excluded.

    :rtype: dict[int, int]
    """
    counts = Counter(len(model.support) for model in family
                     if model.support is not None)
    return dict(sorted(counts.items()))
