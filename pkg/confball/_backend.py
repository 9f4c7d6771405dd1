import math

import numba
import numpy as np


@numba.njit(
    "float64(float64, float64, float64, int64, float64, float64, float64,"
    " float64, int64)",
    nogil=True,
    cache=True,
)
def _poisson_mixture(
    half: float,
    lam: float,
    a: float,
    kmode: int,
    start: float,
    g_zero: float,
    direction: float,
    tol: float,
    budget: int,
) -> float:
    # sums w_k * G(a + k, half) with Poisson(lam) weights w_k, walking
    # outward from the modal index kmode in both directions
    # G is the regularized lower (direction=-1) or upper (direction=+1)
    # incomplete gamma function, start = G(a + kmode, half) and
    # g_zero = G(a, half)
    # a walk stops once the neglected terms are below tol times the sum
    # returns NaN if the term budget is exhausted
    log_half = math.log(half)
    w_mode = math.exp(-lam + kmode * math.log(lam) - math.lgamma(kmode + 1.0))
    total = w_mode * start
    nterms = 1

    w = w_mode
    g = start
    k = kmode
    while True:
        # G(b + 1, x) = G(b, x) -/+ x^b e^(-x) / Gamma(b + 1)
        g += direction * math.exp(
            (a + k) * log_half - half - math.lgamma(a + k + 1.0)
        )
        g = min(max(g, 0.0), 1.0)
        k += 1
        w *= lam / k
        total += w * g
        nterms += 1
        if k + 1.0 > lam:
            # lower G decreases in k, upper G is at most 1
            bound = g if direction < 0 else 1.0
            rest = w * lam / (k + 1.0 - lam) * bound
            if rest < 0.5 * tol * max(total, 1e-300):
                break
        if nterms > budget:
            return np.nan

    w = w_mode
    g = start
    k = kmode
    while k > 0:
        g -= direction * math.exp(
            (a + k - 1.0) * log_half - half - math.lgamma(a + k)
        )
        g = min(max(g, 0.0), 1.0)
        w *= k / lam
        k -= 1
        total += w * g
        nterms += 1
        if k < lam:
            # lower G increases towards g_zero, upper G decreases in -k
            bound = g_zero if direction < 0 else g
            rest = w * k / (lam - k) * bound
            if rest < 0.5 * tol * max(total, 1e-300):
                break
        if nterms > budget:
            return np.nan

    return min(max(total, 0.0), 1.0)
