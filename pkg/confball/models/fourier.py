import numpy as np

from confball.errors import DomainError, PreconditionError
from confball.models.family import ModelFamily
from confball.models.linear import LinearModel, full_model, orthonormalize
from confball.scope import check_probability


def design_points(n: int) -> np.ndarray:
    """Equispaced design ``x_i = i / n`` for ``i = 1, ..., n``."""
    if n < 1:
        raise DomainError(f"n has to be positive, got {n}")
    return np.arange(1, n + 1, dtype=np.float64) / n


def fourier_design(n: int, m: int) -> np.ndarray:
    """Trigonometric design matrix of shape ``(n, 2m + 1)`` with the
    columns ``1, cos(2 pi j x), sin(2 pi j x)`` for ``j = 1, ..., m``
    evaluated at the points of :meth:`design_points`.

    :type n: int
    :type m: int
    :rtype: np.ndarray
    """
    if m < 0:
        raise DomainError(f"m has to be nonnegative, got {m}")
    x = design_points(n)
    columns = [np.ones(n)]
    for j in range(1, m + 1):
        columns.append(np.cos(2 * np.pi * j * x))
        columns.append(np.sin(2 * np.pi * j * x))
    return np.column_stack(columns)


def fourier_model(n: int, m: int, beta_m: float) -> LinearModel:
    """Model spanned by the constant and the first ``m`` cosine and
    sine frequencies, labelled ``str(m)``.
    """
    return LinearModel(str(m), orthonormalize(fourier_design(n, m)), beta_m)


def fourier_family(n: int, K: int, beta: float = 0.1) -> ModelFamily:
    """Nested family of trigonometric models with frequencies
    ``m = 2, 4, ..., 2^K`` plus the full model.

    The model ``m = 2^k`` has dimension ``2 * 2^k + 1`` and level
    ``beta * 2^-k``, the full model gets ``beta * 2^-K`` so that the
    levels sum up to ``beta``.

    :param n: Number of observations.
    :type n: int
    :param K: Number of dyadic levels.
    :type K: int
    :param beta: Global risk., defaults to 0.1
    :type beta: float, optional
    :rtype: ModelFamily
    :raises: PreconditionError if ``2 * 2^K + 1 >= n``
    """
    check_probability("beta", beta)
    if K < 1:
        raise DomainError(f"K has to be at least 1, got {K}")
    if not 2 * 2**K + 1 < n:
        raise PreconditionError(
            f"2 * 2^K + 1 < n is violated: {2 * 2**K + 1} >= {n}"
        )
    models = [fourier_model(n, 2**k, beta * 2.0**-k) for k in range(1, K + 1)]
    models.append(full_model(n, beta * 2.0**-K))
    return ModelFamily(models, beta=beta)
