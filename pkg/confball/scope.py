import os
import warnings
from typing import Optional

import numpy as np

from confball.errors import DimensionError, DomainError, PreconditionError

THREADS_ENV = "CONFBALL_THREADS"


def force_vector(y: np.ndarray, n: Optional[int] = None) -> np.ndarray:
    """Makes the attempt to format the given observation as a one
    dimensional float array of length ``n``.

    Column and row vectors (arrays of shape ``(n, 1)`` or ``(1, n)``)
    are flattened with a warning.

    :type y: np.ndarray
    :param n: Expected length. No check is done if ``None``.,
        defaults to None
    :type n: int, optional
    :rtype: np.ndarray
    :raises: DimensionError if ``y`` can't be read as a vector of length
        ``n``
    """
    y = np.asarray(y, dtype=np.float64)
    if y.ndim == 2 and 1 in y.shape:
        warnings.warn("The given observation is two dimensional and "
                      "needs to be flattened.")
        y = y.ravel()
    if y.ndim != 1:
        raise DimensionError(f"Expected a vector, got an array of shape "
                             f"{y.shape}")
    if n is not None and y.shape[0] != n:
        raise DimensionError(f"Expected a vector of length {n}, got "
                             f"length {y.shape[0]}")
    return y


def check_probability(name: str, value: float) -> float:
    """Checks that ``value`` lies in the open interval ``(0, 1)`` and
    returns it as a float.

    :raises: DomainError otherwise
    """
    value = float(value)
    if not 0.0 < value < 1.0:
        raise DomainError(f"{name} has to satisfy 0 < {name} < 1, "
                          f"got {value!r}")
    return value


def check_levels(alpha: float, beta: float) -> tuple[float, float]:
    """Validates the test level ``alpha`` and the global risk ``beta``
    of a confidence ball construction.

    :returns: The pair ``(alpha, beta)`` as floats.
    :rtype: tuple[float, float]
    :raises: DomainError if one of the levels is not in ``(0, 1)``,
        PreconditionError if ``alpha + beta >= 1``
    """
    alpha = check_probability("alpha", alpha)
    beta = check_probability("beta", beta)
    if not alpha + beta < 1.0:
        raise PreconditionError(f"alpha + beta < 1 is violated: "
                                f"{alpha} + {beta} >= 1")
    return alpha, beta


def resolve_threads(requested: Optional[int] = None) -> int:
    """Returns the number of worker threads to use.

    The value is the requested number (or the number of CPUs if
    ``None``), capped by the environment variable ``CONFBALL_THREADS``
    if it is set.

    :type requested: int, optional
    :rtype: int
    """
    threads = requested if requested is not None else (os.cpu_count() or 1)
    cap = os.environ.get(THREADS_ENV)
    if cap is not None:
        try:
            threads = min(threads, int(cap))
        except ValueError:
            warnings.warn(f"Ignoring non-integer {THREADS_ENV}={cap!r}")
    return max(int(threads), 1)
