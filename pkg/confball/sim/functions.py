from typing import Callable, Optional

import numpy as np
import pandas as pd

from confball.errors import DomainError
from confball.models.fourier import design_points
from confball.scope import force_vector

FUNCTIONS = ("F1", "F2", "F3")


def f1(x: np.ndarray) -> np.ndarray:
    """``cos(2 pi x)``"""
    return np.cos(2 * np.pi * x)


def f2(x: np.ndarray) -> np.ndarray:
    """``cos(2 pi x) + 0.3 sin(20 pi x)``"""
    return np.cos(2 * np.pi * x) + 0.3 * np.sin(20 * np.pi * x)


def f3(x: np.ndarray) -> np.ndarray:
    """Step function with values 1.5, 0.5, 2 on the open intervals
    ``(0, 0.3)``, ``(0.3, 0.6)``, ``(0.6, 0.8)`` and 0 elsewhere.
    """
    x = np.asarray(x, dtype=np.float64)
    return np.select(
        [(0 < x) & (x < 0.3), (0.3 < x) & (x < 0.6), (0.6 < x) & (x < 0.8)],
        [1.5, 0.5, 2.0],
        default=0.0,
    )


_REGISTRY: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "F1": f1,
    "F2": f2,
    "F3": f3,
}


def test_function(which: str, n: int) -> np.ndarray:
    """Evaluates one of the functions ``"F1"``, ``"F2"``, ``"F3"`` at
    the design points ``x_i = i / n``.

    :type which: str
    :type n: int
    :rtype: np.ndarray
    """
    try:
        function = _REGISTRY[which.upper()]
    except KeyError:
        raise DomainError(f"Unknown function {which!r}, expected one of "
                          f"{FUNCTIONS}") from None
    return function(design_points(n))


test_function.__test__ = False


def gen_data(
    f: np.ndarray,
    sigma: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Simulates ``y = f + sigma * eps`` with standard Gaussian noise
    drawn from ``rng``.

    :rtype: np.ndarray
    """
    if not sigma > 0:
        raise DomainError(f"sigma has to be positive, got {sigma!r}")
    f = force_vector(f)
    return f + sigma * rng.standard_normal(f.shape[0])


def figure_data(
    which: str,
    n: int = 1000,
    sigma: float = 1.0,
    seed: Optional[int] = None,
) -> pd.DataFrame:
    """One simulated sample of a test function as a table with the
    columns ``x``, ``F`` and ``y``.

    :rtype: pd.DataFrame
    """
    f = test_function(which, n)
    y = gen_data(f, sigma, np.random.default_rng(seed))
    return pd.DataFrame({"x": design_points(n), "F": f, "y": y})
