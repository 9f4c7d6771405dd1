import math
import warnings
from dataclasses import dataclass
from typing import Optional

from confball.errors import DomainError
from confball.scope import check_probability


@dataclass(frozen=True)
class BoundConstants:
    """Logarithmic constants entering the explicit radius bounds.

    ``L_m`` and ``L_alpha`` are always defined. ``L1`` only exists if
    ``alpha + beta < 1`` and ``L2``, ``L3`` only if
    ``alpha + 2 beta < 1``; otherwise they are ``None``.
    """

    L_m: float
    L_alpha: float
    L1: Optional[float] = None
    L2: Optional[float] = None
    L3: Optional[float] = None

    @classmethod
    def from_levels(
        cls,
        alpha: float,
        beta: float,
        beta_m: Optional[float] = None,
    ) -> "BoundConstants":
        """Derives the constants from the test level ``alpha``, the
        global risk ``beta`` and the risk ``beta_m`` of a model (which
        defaults to ``beta``).

        :rtype: BoundConstants
        """
        check_probability("alpha", alpha)
        check_probability("beta", beta)
        if beta_m is None:
            beta_m = beta
        check_probability("beta_m", beta_m)
        L1 = L2 = L3 = None
        if alpha + beta < 1.0:
            L1 = -4.0 * math.log(1.0 - alpha - beta) / 81.0
        gap = 1.0 - alpha - 2.0 * beta
        if gap > 0.0:
            L2 = 2.0 * math.log(1.0 + 4.0 * gap**2)
            L3 = -math.log(gap)
        return cls(
            L_m=-math.log(beta_m),
            L_alpha=-math.log(alpha),
            L1=L1,
            L2=L2,
            L3=L3,
        )


def _upper_from_logs(
    D: int,
    N: int,
    eta: float,
    L_m: float,
    L_alpha: float,
) -> float:
    # bound in units of tau2, written with the logarithms so that tiny
    # levels (dimensional allocation) don't underflow
    if N == 0:
        return D + 2.0 * math.sqrt(D * L_m) + 2.0 * L_m
    if D == 0:
        return (2.0 * N * eta
                + 4.0 * math.sqrt(N) * (math.sqrt(L_m) + math.sqrt(L_alpha))
                + 8.0 * L_m + 4.0 * L_alpha)
    return (2.0 * N * eta + D
            + 2.0 * math.sqrt(N) * (3.0 * math.sqrt(L_m)
                                    + 2.0 * math.sqrt(L_alpha))
            + 2.0 * (5.0 * L_m + 2.0 * L_alpha))


def _check_dims(D: int, N: int, eta: float, tau2: float) -> None:
    if D < 0 or N < 0 or D + N < 1:
        raise DomainError(f"Invalid dimensions D={D}, N={N}")
    if not 0.0 <= eta < 1.0:
        raise DomainError(f"eta has to satisfy 0 <= eta < 1, got {eta!r}")
    if not tau2 > 0:
        raise DomainError(f"tau2 has to be positive, got {tau2!r}")


def upper_bound_from_logs(
    D: int,
    N: int,
    eta: float,
    L_m: float,
    L_alpha: float,
    tau2: float,
) -> float:
    """Same as :meth:`upper_bound_rho` but with the levels given by
    their logarithms ``L_m = log(1/beta_m)`` and
    ``L_alpha = log(1/alpha)``.

    :rtype: float
    """
    _check_dims(D, N, eta, tau2)
    if L_m <= 0 or L_alpha <= 0:
        raise DomainError("L_m and L_alpha have to be positive")
    if D > N > 0:
        warnings.warn(f"The explicit upper bound is loose for models with "
                      f"D > n/2 (D={D}, N={N}).")
    return _upper_from_logs(D, N, eta, L_m, L_alpha) * tau2


def upper_bound_rho(
    D: int,
    N: int,
    eta: float,
    alpha: float,
    beta_m: float,
    tau2: float,
) -> float:
    """Explicit upper bound of the squared radius ``rho_m^2`` of a
    model with dimension ``D`` and residual dimension ``N``.

    With ``L_m = log(1/beta_m)`` and ``L_a = log(1/alpha)`` the bound
    is, in units of ``tau2``:

    - full model (``N = 0``): ``n + 2 sqrt(n L_m) + 2 L_m``,
    - ``D = 0``:
      ``2 n eta + 4 sqrt(n) (sqrt(L_m) + sqrt(L_a)) + 8 L_m + 4 L_a``,
    - otherwise:
      ``2 N eta + D + 2 sqrt(N) (3 sqrt(L_m) + 2 sqrt(L_a))
      + 2 (5 L_m + 2 L_a)``.

    :param D: Dimension of the model.
    :type D: int
    :param N: Residual dimension ``n - D``.
    :type N: int
    :param eta: Relative width of the variance interval.
    :type eta: float
    :type alpha: float
    :type beta_m: float
    :param tau2: Upper end of the variance interval.
    :type tau2: float
    :rtype: float
    """
    check_probability("alpha", alpha)
    check_probability("beta_m", beta_m)
    return upper_bound_from_logs(D, N, eta, -math.log(beta_m),
                                 -math.log(alpha), tau2)
