"""Explicit envelopes for the quantiles of noncentral chi-square
distributions.

For all ``u`` in ``(0, 1)``, ``z >= 0`` and ``d >= 1`` the
``(1-u)``-quantile ``q(z, d, u)`` satisfies::

    q(z, d, u)     <= z + d + 2 sqrt((2z + d) log(1/u)) + 2 log(1/u)
    q(z, d, 1 - u) >= z + d - 2 sqrt((2z + d) log(1/u))

The functions in this module evaluate the right hand sides. They are
used as brackets for the numerical quantile inversion and to build the
explicit radius bounds in :mod:`confball.bounds`.
"""

import math

from confball.errors import DomainError


def _check(z: float, d: int, u: float) -> None:
    if z < 0:
        raise DomainError(f"Noncentrality has to be nonnegative, got {z!r}")
    if d < 1:
        raise DomainError(f"Degrees of freedom have to be >= 1, got {d!r}")
    if not 0.0 < u < 1.0:
        raise DomainError(f"u has to satisfy 0 < u < 1, got {u!r}")


def birge_upper(z: float, d: int, u: float) -> float:
    """Upper envelope of the ``(1-u)``-quantile of a noncentral
    chi-square distribution with noncentrality ``z`` and ``d`` degrees
    of freedom.

    :type z: float
    :type d: int
    :type u: float
    :rtype: float
    :raises: DomainError
    """
    _check(z, d, u)
    log_u = math.log(1.0 / u)
    return z + d + 2.0 * math.sqrt((2.0 * z + d) * log_u) + 2.0 * log_u


def birge_lower(z: float, d: int, u: float) -> float:
    """Lower envelope of the ``u``-quantile (the quantile at level
    ``1 - u`` in upper tail notation) of a noncentral chi-square
    distribution. The value may be negative.

    :type z: float
    :type d: int
    :type u: float
    :rtype: float
    :raises: DomainError
    """
    _check(z, d, u)
    return z + d - 2.0 * math.sqrt((2.0 * z + d) * math.log(1.0 / u))
