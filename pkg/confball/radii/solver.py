import logging
import math
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import optimize

from confball.distributions.chi2 import (
    NEG_INF,
    NoncentralChi2,
    chi2_quantile,
    noncentral_chi2_cdf,
)
from confball.errors import BracketError, DomainError, PreconditionError
from confball.radii.variance import Known, RadiusInputs, VarianceSpec
from confball.scope import check_probability

logger = logging.getLogger(__name__)


@lru_cache(maxsize=4096)
def _central_quantile(u: float, d: int) -> float:
    return chi2_quantile(u, NoncentralChi2(0.0, d))


def _check_ratio(sigma_ratio2: float) -> None:
    if not sigma_ratio2 >= 1.0:
        raise DomainError(f"sigma_ratio2 = tau2/sigma2 has to be >= 1, "
                          f"got {sigma_ratio2!r}")


def psi(
    z: float,
    N: int,
    alpha: float,
    sigma_ratio2: float = 1.0,
) -> float:
    """Probability that the goodness-of-fit test accepts when the
    squared distance of the mean to the model is ``z`` (in variance
    units)::

        psi(z) = P[chi2(z, N) <= q(0, N, alpha) * sigma_ratio2]

    The map is continuous, strictly decreasing and
    ``psi(0) = 1 - alpha`` when ``sigma_ratio2 = 1``.

    :param z: Noncentrality, ``z >= 0``.
    :type z: float
    :param N: Residual dimension, ``N >= 1``.
    :type N: int
    :param alpha: Level of the test.
    :type alpha: float
    :param sigma_ratio2: Ratio ``tau2 / sigma2 >= 1`` of the variance
        used in the threshold and the true variance., defaults to 1.0
    :type sigma_ratio2: float, optional
    :rtype: float
    """
    if N < 1:
        raise DomainError(f"Residual dimension has to be >= 1, got {N!r}")
    check_probability("alpha", alpha)
    _check_ratio(sigma_ratio2)
    threshold = _central_quantile(alpha, N) * sigma_ratio2
    return noncentral_chi2_cdf(threshold, NoncentralChi2(z, N))


def search_cap(
    N: int,
    alpha: float,
    beta_m: float,
    sigma_ratio2: float = 1.0,
) -> float:
    """Returns an explicit value beyond which ``psi`` is below
    ``beta_m``, obtained from the quantile envelopes::

        ratio * (2 N eta + 4 sqrt(N) (sqrt(L_m) + sqrt(L_a)) + 8 L_m + 4 L_a)

    with ``L_m = log(1/beta_m)``, ``L_a = log(1/alpha)`` and
    ``eta = 1 - 1/ratio``.

    :rtype: float
    """
    L_m = math.log(1.0 / beta_m)
    L_a = math.log(1.0 / alpha)
    eta = 1.0 - 1.0 / sigma_ratio2
    return sigma_ratio2 * (
        2.0 * N * eta
        + 4.0 * math.sqrt(N) * (math.sqrt(L_m) + math.sqrt(L_a))
        + 8.0 * L_m + 4.0 * L_a
    )


class RadiusSolver:
    """Numerical solver for the radius functionals of the confidence
    ball construction.

    For a model of dimension ``D >= 1`` with residual dimension ``N``
    and known variance, the squared radius is::

        rho^2 = sigma2 * sup_{z >= 0} [z + q(0, D, beta_m / psi(z) ^ 1)]

    with the convention ``q(0, D, 1) = -inf``. The supremum is searched
    on a dense grid over ``[0, z_bar]`` (``psi(z_bar) = beta_m``) and
    refined by a bounded scalar search around the best grid point.
    Under an interval of variances the same problem is solved for every
    ``sigma2`` on a grid over the interval, again followed by a
    refinement.

    :param grid_size: Number of grid points in ``[0, z_bar]``.,
        defaults to 512
    :type grid_size: int, optional
    :param sigma_grid_size: Number of grid points in the variance
        interval., defaults to 64
    :type sigma_grid_size: int, optional
    :param accuracy: Absolute tolerance (in variance units) of the
        refinement steps., defaults to 1e-4
    :type accuracy: float, optional
    """

    def __init__(
        self,
        grid_size: int = 512,
        sigma_grid_size: int = 64,
        accuracy: float = 1e-4,
    ):
        self._grid_size = grid_size
        self._sigma_grid_size = sigma_grid_size
        self._accuracy = accuracy

    def configure(
        self,
        grid_size: Optional[int] = None,
        sigma_grid_size: Optional[int] = None,
        accuracy: Optional[float] = None,
    ) -> None:
        """Makes changes to the default configuration of the solver if
        arguments differ from ``None``.

        :type grid_size: int, optional
        :type sigma_grid_size: int, optional
        :type accuracy: float, optional
        """
        if grid_size is not None:
            if grid_size < 3:
                raise DomainError("grid_size has to be at least 3")
            self._grid_size = grid_size
        if sigma_grid_size is not None:
            if sigma_grid_size < 2:
                raise DomainError("sigma_grid_size has to be at least 2")
            self._sigma_grid_size = sigma_grid_size
        if accuracy is not None:
            if not accuracy > 0:
                raise DomainError("accuracy has to be positive")
            self._accuracy = accuracy

    @property
    def settings(self) -> tuple[int, int, float]:
        """Grid sizes and accuracy the radii are computed with."""
        return (self._grid_size, self._sigma_grid_size, self._accuracy)

    def z_bar(
        self,
        N: int,
        alpha: float,
        beta_m: float,
        sigma_ratio2: float = 1.0,
    ) -> float:
        """Returns the root ``z_bar`` of ``psi(z) = beta_m``, the right
        end of the set of distances the test accepts with probability
        larger than ``beta_m``.

        :rtype: float
        :raises: PreconditionError if ``beta_m >= psi(0)``,
            BracketError if no sign change is found
        """
        check_probability("beta_m", beta_m)
        psi0 = psi(0.0, N, alpha, sigma_ratio2)
        if not beta_m < psi0:
            raise PreconditionError(
                f"beta_m < psi(0) is violated: {beta_m} >= {psi0} "
                f"(psi(0) = 1 - alpha for known variance)"
            )
        cap = 4.0 * search_cap(N, alpha, beta_m, sigma_ratio2)
        for _ in range(8):
            if psi(cap, N, alpha, sigma_ratio2) < beta_m:
                break
            logger.debug("Search cap %g too small, doubling", cap)
            cap *= 2.0
        else:
            raise BracketError(
                f"psi stays above beta_m={beta_m} up to z={cap} "
                f"(N={N}, alpha={alpha}, ratio={sigma_ratio2})"
            )
        root = optimize.brentq(
            lambda z: psi(z, N, alpha, sigma_ratio2) - beta_m,
            0.0, cap, xtol=1e-10, rtol=4 * np.finfo(float).eps,
            maxiter=500,
        )
        return float(root)

    def _supremum(
        self,
        extension: Callable[[float], float],
        grid: np.ndarray,
        values: np.ndarray,
    ) -> float:
        # grid maximum followed by a bounded search in the neighbouring
        # cells, never returning less than the grid maximum
        best = int(np.argmax(values))
        lo = grid[max(best - 1, 0)]
        hi = grid[min(best + 1, len(grid) - 1)]
        if hi <= lo:
            return float(values[best])
        result = optimize.minimize_scalar(
            lambda t: -extension(t),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": self._accuracy},
        )
        refined = -float(result.fun)
        logger.debug("Grid supremum %.8g at %.6g, refined %.8g at %.6g",
                     values[best], grid[best], refined, result.x)
        return max(float(values[best]), refined)

    def objective(
        self,
        z: float,
        D: int,
        N: int,
        alpha: float,
        beta_m: float,
        sigma_ratio2: float = 1.0,
    ) -> float:
        """Returns ``z + q(0, D, beta_m / psi(z) ^ 1)``, which is
        ``-inf`` whenever ``beta_m >= psi(z)``.

        :rtype: float
        """
        u = beta_m / psi(z, N, alpha, sigma_ratio2)
        if u >= 1.0:
            return NEG_INF
        return z + _central_quantile(u, D)

    def _supremum_over_z(
        self,
        D: int,
        N: int,
        alpha: float,
        beta_m: float,
        sigma_ratio2: float,
    ) -> float:
        # sup over z of the objective in variance units of sigma2
        zb = self.z_bar(N, alpha, beta_m, sigma_ratio2)
        grid = np.linspace(0.0, zb, self._grid_size)
        values = np.empty(self._grid_size)
        for i, z in enumerate(grid[:-1]):
            values[i] = self.objective(z, D, N, alpha, beta_m, sigma_ratio2)
        # left limit at z_bar, where the quantile tends to 0
        values[-1] = zb

        def extension(z: float) -> float:
            # continuous extension of the objective onto [0, z_bar]
            u = beta_m / psi(z, N, alpha, sigma_ratio2)
            if u >= 1.0:
                return z
            return z + _central_quantile(u, D)

        return self._supremum(extension, grid, values)

    def _scaled_inner(self, inputs: RadiusInputs, s: float) -> float:
        # radius at sigma2 = s * tau2
        ratio = 1.0 / s
        if inputs.D == 0:
            inner = self.z_bar(inputs.N, inputs.alpha, inputs.beta_m, ratio)
        else:
            inner = self._supremum_over_z(inputs.D, inputs.N, inputs.alpha,
                                          inputs.beta_m, ratio)
        return s * inputs.variance.tau2 * inner

    def _full_model(self, inputs: RadiusInputs) -> float:
        return (_central_quantile(inputs.beta_m, inputs.n)
                * inputs.variance.tau2)

    @staticmethod
    def _is_full(inputs: RadiusInputs, is_full_model: Optional[bool]) -> bool:
        if is_full_model is None:
            return inputs.is_full_model
        if is_full_model != inputs.is_full_model:
            raise DomainError(f"The full model is the one with N = 0, got "
                              f"N={inputs.N} and is_full_model="
                              f"{is_full_model}")
        return is_full_model

    def rho_sq_known(
        self,
        inputs: RadiusInputs,
        is_full_model: Optional[bool] = None,
    ) -> float:
        """Returns the squared radius of a model under known variance.

        - full model: ``q(0, n, beta_m) * sigma2``,
        - ``D = 0``: ``z_bar * sigma2`` with ``N = n``,
        - otherwise: the supremum described in the class docstring.

        :param inputs: Description of the model. The variance has to be
            known exactly.
        :type inputs: RadiusInputs
        :param is_full_model: Inferred from ``inputs.N == 0`` if
            ``None``., defaults to None
        :type is_full_model: bool, optional
        :rtype: float
        :raises: DomainError if the variance is not exactly known
        """
        if not inputs.variance.is_known:
            raise DomainError("rho_sq_known needs an exactly known "
                              "variance, use rho_sq_interval")
        if self._is_full(inputs, is_full_model):
            return self._full_model(inputs)
        return self._scaled_inner(inputs, 1.0)

    def rho_sq_interval(
        self,
        inputs: RadiusInputs,
        is_full_model: Optional[bool] = None,
    ) -> float:
        """Returns the squared radius of a model when the variance is
        only known to lie in ``[(1 - eta) tau2, tau2]``::

            rho^2 = sup_{sigma2 in I} sup_{z >= 0}
                    [z + q(0, D, beta_m / psi_sigma(z) ^ 1)] * sigma2

        where ``psi_sigma`` uses the threshold ratio
        ``tau2 / sigma2``. For ``D = 0`` the radius is the largest value
        of ``z_bar * sigma2`` over the interval and for the full model
        ``q(0, n, beta_m) * tau2``. With ``eta = 0`` the result is
        identical to :meth:`rho_sq_known`.

        :type inputs: RadiusInputs
        :type is_full_model: bool, optional
        :rtype: float
        """
        if self._is_full(inputs, is_full_model):
            return self._full_model(inputs)
        eta = inputs.variance.eta
        if eta == 0:
            return self._scaled_inner(inputs, 1.0)
        grid = np.linspace(1.0 - eta, 1.0, self._sigma_grid_size)
        values = np.array([self._scaled_inner(inputs, s) for s in grid])
        return self._supremum(
            lambda s: self._scaled_inner(inputs, s), grid, values,
        )

    def rho_sq(self, inputs: RadiusInputs) -> float:
        """Dispatches to :meth:`rho_sq_known` or :meth:`rho_sq_interval`
        depending on the variance specification.
        """
        if inputs.variance.is_known:
            return self.rho_sq_known(inputs)
        return self.rho_sq_interval(inputs)

    def radius_table(
        self,
        entries: Sequence[tuple[int, int, float]],
        alpha: float,
        variance: VarianceSpec,
        max_workers: Optional[int] = None,
    ) -> list[float]:
        """Returns the squared radii of several models at once.

        :param entries: Triples ``(D, N, beta_m)``. An entry with
            ``N = 0`` is the full model.
        :type entries: Sequence[tuple[int, int, float]]
        :type alpha: float
        :type variance: VarianceSpec
        :param max_workers: Number of threads evaluating distinct
            entries concurrently. Sequential if ``None`` or 1.,
            defaults to None
        :type max_workers: int, optional
        :returns: Squared radii in the order of ``entries``.
        :rtype: list[float]
        """
        unique = list(dict.fromkeys(
            (int(D), int(N), float(beta_m)) for D, N, beta_m in entries
        ))

        def compute(entry: tuple[int, int, float]) -> float:
            D, N, beta_m = entry
            return self.rho_sq(RadiusInputs(D, N, alpha, beta_m, variance))

        if max_workers is not None and max_workers > 1 and len(unique) > 1:
            with ThreadPoolExecutor(max_workers=max_workers) as pool:
                values = list(pool.map(compute, unique))
        else:
            values = [compute(entry) for entry in unique]
        lookup = dict(zip(unique, values))
        return [lookup[(int(D), int(N), float(beta_m))]
                for D, N, beta_m in entries]


_DEFAULT_SOLVER = RadiusSolver()


def default_solver() -> RadiusSolver:
    """Returns the module-wide solver used by the functions of this
    module.
    """
    return _DEFAULT_SOLVER


def z_bar(
    N: int,
    alpha: float,
    beta_m: float,
    sigma_ratio2: float = 1.0,
) -> float:
    """See :meth:`RadiusSolver.z_bar`."""
    return _DEFAULT_SOLVER.z_bar(N, alpha, beta_m, sigma_ratio2)


def rho_sq_known(
    inputs: RadiusInputs,
    is_full_model: Optional[bool] = None,
) -> float:
    """See :meth:`RadiusSolver.rho_sq_known`."""
    return _DEFAULT_SOLVER.rho_sq_known(inputs, is_full_model)


def rho_sq_interval(
    inputs: RadiusInputs,
    is_full_model: Optional[bool] = None,
) -> float:
    """See :meth:`RadiusSolver.rho_sq_interval`."""
    return _DEFAULT_SOLVER.rho_sq_interval(inputs, is_full_model)


def radius_table(
    entries: Sequence[tuple[int, int, float]],
    alpha: float,
    variance: VarianceSpec,
    max_workers: Optional[int] = None,
) -> list[float]:
    """See :meth:`RadiusSolver.radius_table`."""
    return _DEFAULT_SOLVER.radius_table(entries, alpha, variance,
                                        max_workers)


def trivial_radius_sq(n: int, beta: float, variance: VarianceSpec) -> float:
    """Squared radius ``q(0, n, beta) * tau2`` of the ball centered at
    the observation itself, the reference every other ball is compared
    to.

    :rtype: float
    """
    check_probability("beta", beta)
    return _central_quantile(beta, n) * variance.tau2
