import logging
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy import optimize, special

from confball._backend import _poisson_mixture
from confball.distributions.envelopes import birge_lower, birge_upper
from confball.errors import ConvergenceError, DomainError

logger = logging.getLogger(__name__)

#: Value of the quantile at ``u = 1`` under the convention
#: ``q(0, d, 1) = -inf``. It is a true negative infinity (never NaN), so
#: it drops out of maxima and suprema.
NEG_INF: float = -math.inf

#: Truncation threshold for the Poisson tail mass of the mixture series.
SERIES_TOL: float = 1e-13

#: Maximal number of terms of the mixture series.
SERIES_BUDGET: int = 10**6


@dataclass(frozen=True)
class NoncentralChi2:
    """Parameter pair of a (non)central chi-square distribution, the
    law of ``||mu + eps||^2`` for a standard Gaussian vector ``eps`` in
    ``R^d`` and ``||mu||^2 = z``.

    :param z: Noncentrality parameter, ``z >= 0``.
    :type z: float
    :param d: Degrees of freedom, ``d >= 0``. The value 0 is only
        meaningful for :func:`chi2_quantile`.
    :type d: int
    """

    z: float
    d: int

    def __post_init__(self):
        if not self.z >= 0:
            raise DomainError(f"Noncentrality has to be nonnegative, "
                              f"got {self.z!r}")
        if int(self.d) != self.d or self.d < 0:
            raise DomainError(f"Degrees of freedom have to be a "
                              f"nonnegative integer, got {self.d!r}")

    @property
    def mean(self) -> float:
        return self.z + self.d

    @property
    def variance(self) -> float:
        return 2.0 * (self.d + 2.0 * self.z)


def _check_point(x: float, d: int) -> None:
    if not x >= 0:
        raise DomainError(f"x has to be nonnegative, got {x!r}")
    if d < 1:
        raise DomainError(f"Degrees of freedom have to be >= 1, got {d!r}")


def central_chi2_cdf(x: float, d: int) -> float:
    """Returns ``P[X <= x]`` for a central chi-square variable ``X``
    with ``d`` degrees of freedom, i.e. the regularized lower incomplete
    gamma function ``P(d/2, x/2)``.

    :type x: float
    :type d: int
    :rtype: float
    :raises: DomainError if ``x < 0`` or ``d < 1``
    """
    _check_point(x, d)
    return float(special.gammainc(0.5 * d, 0.5 * x))


def _mixture(x: float, p: NoncentralChi2, upper: bool) -> float:
    # Poisson mixture of central chi-square distribution functions
    lam = 0.5 * p.z
    a = 0.5 * p.d
    kmode = int(math.floor(lam))
    gamma = special.gammaincc if upper else special.gammainc
    start = float(gamma(a + kmode, 0.5 * x))
    g_zero = float(gamma(a, 0.5 * x))
    value = _poisson_mixture(0.5 * x, lam, a, kmode, start, g_zero,
                             1.0 if upper else -1.0, SERIES_TOL,
                             SERIES_BUDGET)
    if math.isnan(value):
        raise ConvergenceError(
            f"Noncentral chi-square series did not converge within "
            f"{SERIES_BUDGET} terms for x={x}, z={p.z}, d={p.d}"
        )
    return value


def noncentral_chi2_cdf(x: float, p: NoncentralChi2) -> float:
    """Returns the distribution function of a noncentral chi-square
    law at ``x``.

    The value is the Poisson mixture ``sum_k e^(-z/2) (z/2)^k / k! *
    P[chi2(d + 2k) <= x]``, summed outward from the modal index
    ``floor(z/2)`` until the neglected terms drop below
    :data:`SERIES_TOL` times the partial sum, so that small
    probabilities keep their relative accuracy.

    :type x: float
    :type p: NoncentralChi2
    :rtype: float
    :raises: DomainError, ConvergenceError
    """
    _check_point(x, p.d)
    if x == 0:
        return 0.0
    if p.z == 0:
        return central_chi2_cdf(x, p.d)
    return _mixture(x, p, upper=False)


def chi2_sf(x: float, p: NoncentralChi2) -> float:
    """Returns the upper tail ``P[X > x]`` of a noncentral chi-square
    law. It is computed from the upper incomplete gamma function and
    does not suffer from cancellation for small tail probabilities.

    :type x: float
    :type p: NoncentralChi2
    :rtype: float
    :raises: DomainError, ConvergenceError
    """
    _check_point(x, p.d)
    if x == 0:
        return 1.0
    if p.z == 0:
        return float(special.gammaincc(0.5 * p.d, 0.5 * x))
    return _mixture(x, p, upper=True)


def chi2_quantile(
    u: float,
    p: NoncentralChi2,
    allow_one: bool = False,
) -> float:
    """Returns the ``(1-u)``-quantile ``q`` of a noncentral chi-square
    law, that is the solution of ``P[X > q] = u``.

    Conventions:

    - ``q = 0`` whenever ``p.d == 0``,
    - ``q = -inf`` (:data:`NEG_INF`) for ``u = 1``; this value is only
      returned if ``allow_one`` is set.

    The central case is delegated to the inverse of the regularized
    upper incomplete gamma function. Otherwise the root is searched by
    Brent's method inside the bracket given by
    :func:`~confball.distributions.envelopes.birge_lower` (clamped at 0)
    and :func:`~confball.distributions.envelopes.birge_upper`.

    :param u: Upper tail probability in ``(0, 1)`` (or ``(0, 1]`` with
        ``allow_one``).
    :type u: float
    :type p: NoncentralChi2
    :param allow_one: Opts into the convention for ``u = 1``.,
        defaults to False
    :type allow_one: bool, optional
    :rtype: float
    :raises: DomainError, ConvergenceError
    """
    if not 0.0 < u <= 1.0:
        raise DomainError(f"u has to satisfy 0 < u <= 1, got {u!r}")
    if u == 1.0 and not allow_one:
        raise DomainError("u = 1 is only allowed with allow_one=True")
    if p.d == 0:
        return 0.0
    if u == 1.0:
        return NEG_INF
    if p.z == 0:
        return 2.0 * float(special.gammainccinv(0.5 * p.d, u))

    if u < 0.5:
        def excess(q: float) -> float:
            return u - chi2_sf(q, p)
    else:
        def excess(q: float) -> float:
            return noncentral_chi2_cdf(q, p) - (1.0 - u)

    lo = max(0.0, birge_lower(p.z, p.d, 1.0 - u))
    hi = birge_upper(p.z, p.d, u)
    if excess(lo) > 0:
        logger.debug("Lower envelope %g is not a bracket, using 0", lo)
        lo = 0.0
    for _ in range(64):
        if excess(hi) >= 0:
            break
        logger.debug("Upper envelope %g is not a bracket, doubling", hi)
        hi *= 2.0
    else:
        raise ConvergenceError(f"No bracket found for the quantile at "
                               f"u={u}, z={p.z}, d={p.d}")
    if excess(hi) == 0:
        return hi
    if excess(lo) == 0:
        return lo
    return float(optimize.brentq(excess, lo, hi, xtol=1e-12,
                                 rtol=4 * np.finfo(float).eps, maxiter=500))


def sample_noncentral(
    p: NoncentralChi2,
    rng: np.random.Generator,
    size: Optional[Union[int, tuple[int, ...]]] = None,
) -> Union[float, np.ndarray]:
    """Draws from the law of ``||mu + eps||^2`` with ``||mu||^2 = p.z``
    and ``eps`` standard Gaussian in ``R^(p.d)``.

    :type p: NoncentralChi2
    :param rng: Caller-owned random stream.
    :type rng: np.random.Generator
    :param size: Output shape. A single float is drawn if ``None``.,
        defaults to None
    :type size: Union[int, tuple[int, ...]], optional
    :raises: DomainError if ``p.d < 1``
    """
    if p.d < 1:
        raise DomainError(f"Degrees of freedom have to be >= 1, got {p.d!r}")
    if p.z == 0:
        draws = rng.chisquare(p.d, size=size)
    else:
        draws = rng.noncentral_chisquare(p.d, p.z, size=size)
    if size is None:
        return float(draws)
    return draws
