import math

from scipy import special

from confball.errors import DomainError


def _check_subset(n: int, D: int) -> None:
    if not 1 <= D <= n:
        raise DomainError(f"Subset size has to satisfy 1 <= D <= n, got "
                          f"D={D}, n={n}")


def log_binomial(n: int, D: int) -> float:
    """Logarithm of the binomial coefficient ``C(n, D)`` computed with
    the log-gamma function.

    :rtype: float
    """
    if not 0 <= D <= n:
        raise DomainError(f"Invalid binomial coefficient C({n}, {D})")
    return float(special.gammaln(n + 1) - special.gammaln(D + 1)
                 - special.gammaln(n - D + 1))


def log_subset_count_bound(n: int, D: int) -> float:
    """Returns ``D * log(e * n / D)``, an upper bound of
    ``log C(n, D)``.

    :rtype: float
    """
    _check_subset(n, D)
    return D * (1.0 + math.log(n / D))


def subset_count_bound(n: int, D: int) -> float:
    """Returns ``exp(D * log(e * n / D))``, which dominates the number
    ``C(n, D)`` of subsets of size ``D`` in a set of ``n`` elements.
    The result is ``inf`` if it overflows; use
    :meth:`log_subset_count_bound` for large arguments.

    :type n: int
    :type D: int
    :rtype: float
    """
    value = log_subset_count_bound(n, D)
    try:
        return math.exp(value)
    except OverflowError:
        return math.inf
