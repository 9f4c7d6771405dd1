import math
from typing import NamedTuple, Optional

import numpy as np

from confball.bounds.combinatorics import log_subset_count_bound
from confball.bounds.upper import upper_bound_from_logs
from confball.core.procedure import BallBuilder, ConfidenceBall
from confball.errors import DomainError
from confball.radii.variance import VarianceSpec
from confball.scope import check_levels
from confball.varselect.design import (
    ENUMERATION_CAP,
    DesignMatrix,
    enumerate_models,
)


class Selection(NamedTuple):
    """Selected column labels (``None`` if the full model was selected)
    together with the confidence ball.
    """

    columns: Optional[tuple[int, ...]]
    ball: ConfidenceBall


class VariableSelector:
    """Runs the confidence ball construction over all column subsets of
    a design matrix. The family and the radii are set up once, so one
    selector can process many observations.

    :type X: DesignMatrix | np.ndarray
    :type alpha: float
    :type beta: float
    :type variance: VarianceSpec
    :type max_size: int
    :param allocation: See
        :meth:`~confball.varselect.design.enumerate_models`., defaults to
        "dimensional"
    :type allocation: str, optional
    :param cap: See
        :meth:`~confball.varselect.design.enumerate_models`., defaults to
        ENUMERATION_CAP
    :type cap: int, optional
    """

    def __init__(
        self,
        X: DesignMatrix,
        alpha: float,
        beta: float,
        variance: VarianceSpec,
        max_size: int,
        allocation: str = "dimensional",
        cap: int = ENUMERATION_CAP,
    ):
        if not isinstance(X, DesignMatrix):
            X = DesignMatrix(X)
        check_levels(alpha, beta)
        self._design = X
        self._family = enumerate_models(X, max_size, beta, cap, allocation)
        self._builder = BallBuilder(self._family, alpha, variance, beta)

    @property
    def family(self):
        return self._family

    @property
    def builder(self) -> BallBuilder:
        return self._builder

    def select(self, y: np.ndarray) -> Selection:
        ball = self._builder.build(y)
        return Selection(self._family[ball.selected].support, ball)


def select_variables(
    y: np.ndarray,
    X: DesignMatrix,
    alpha: float,
    beta: float,
    variance: VarianceSpec,
    max_size: int,
    allocation: str = "dimensional",
) -> Selection:
    """Builds the confidence ball of ``y`` over the family of column
    subsets of ``X`` and returns the selected subset with it.

    :rtype: Selection
    """
    return VariableSelector(X, alpha, beta, variance, max_size,
                            allocation).select(y)


def selection_radius_bound(
    n: int,
    s: int,
    alpha: float,
    beta: float,
    sigma2: float,
) -> float:
    """Explicit upper bound of the squared radius of a subset model of
    size ``s`` with dimensional allocation, obtained from
    :meth:`~confball.bounds.upper.upper_bound_rho` with
    ``log(1/beta_m) <= log(1/beta) + log(n) + s log(e n / s)``.

    :type n: int
    :param s: Size of the subset, ``1 <= s <= n/2``.
    :type s: int
    :type alpha: float
    :type beta: float
    :type sigma2: float
    :rtype: float
    """
    check_levels(alpha, beta)
    if not 1 <= s <= n / 2:
        raise DomainError(f"s has to lie in [1, n/2], got s={s}, n={n}")
    L_m = -math.log(beta) + math.log(n) + log_subset_count_bound(n, s)
    return upper_bound_from_logs(s, n - s, 0.0, L_m, -math.log(alpha),
                                 sigma2)
