import math

from confball.bounds.upper import BoundConstants, _check_dims
from confball.errors import PreconditionError

#: ``alpha + beta`` has to be smaller for the dimension branch.
DIMENSION_BRANCH_LIMIT = 1.0 - math.exp(-1.0 / 36.0)
#: ``alpha + 2 beta`` may not exceed this for the residual branches.
RESIDUAL_BRANCH_LIMIT = 1.0 - math.exp(-1.0 / 4.0)


def lower_bound_radius(
    D: int,
    N: int,
    eta: float,
    alpha: float,
    beta: float,
    tau2: float,
) -> float:
    """Lower bound of the squared radius any confidence procedure with
    coverage ``1 - beta`` needs at a model with dimension ``D`` and
    residual dimension ``N``, if it is accurate at level ``alpha``
    there. The value is::

        max{(D/27 - sqrt(L1 D)) tau2,
            sqrt(L2 N) tau2 / 9,
            (N - 2 sqrt(L3 N)) eta tau2 / 9,
            0}

    where the first term is only included if
    ``alpha + beta < 1 - exp(-1/36)`` and the other two only if
    ``alpha + 2 beta <= 1 - exp(-1/4)``.

    :type D: int
    :type N: int
    :type eta: float
    :type alpha: float
    :type beta: float
    :type tau2: float
    :rtype: float
    :raises: PreconditionError if neither of the two conditions holds
    """
    _check_dims(D, N, eta, tau2)
    constants = BoundConstants.from_levels(alpha, beta)
    dimension_ok = alpha + beta < DIMENSION_BRANCH_LIMIT
    residual_ok = alpha + 2.0 * beta <= RESIDUAL_BRANCH_LIMIT
    if not (dimension_ok or residual_ok):
        raise PreconditionError(
            f"Neither alpha + beta < 1 - exp(-1/36) "
            f"({alpha + beta:.6g} >= {DIMENSION_BRANCH_LIMIT:.6g}) nor "
            f"alpha + 2*beta <= 1 - exp(-1/4) "
            f"({alpha + 2*beta:.6g} > {RESIDUAL_BRANCH_LIMIT:.6g}) holds"
        )
    value = 0.0
    if dimension_ok and D > 0:
        value = max(value, D / 27.0 - math.sqrt(constants.L1 * D))
    if residual_ok and N > 0:
        value = max(value, math.sqrt(constants.L2 * N) / 9.0)
        value = max(value,
                    (N - 2.0 * math.sqrt(constants.L3 * N)) * eta / 9.0)
    return value * tau2


def global_lower_bound(
    n: int,
    eta: float,
    tau2: float,
    alpha: float,
    beta: float,
) -> float:
    """Lower bound of the squared radius that holds simultaneously for
    every mean vector, i.e. :meth:`lower_bound_radius` at ``D = 0``
    and ``N = n``.

    :rtype: float
    """
    return lower_bound_radius(0, n, eta, alpha, beta, tau2)
