import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from confball.cache import RadiusCache
from confball.distributions.chi2 import NoncentralChi2, noncentral_chi2_cdf
from confball.errors import DomainError
from confball.models.family import ModelFamily
from confball.models.linear import LinearModel
from confball.radii.solver import _central_quantile, trivial_radius_sq
from confball.radii.variance import VarianceSpec
from confball.scope import check_levels, check_probability, force_vector

logger = logging.getLogger(__name__)

#: Slack in the comparison of the selected radius with a model radius.
RADIUS_SLACK = 1e-9

_SHARED_CACHE = RadiusCache()


def _thresholds(family: ModelFamily, alpha: float, tau2: float) -> list[float]:
    return [0.0 if model.is_full
            else _central_quantile(alpha, model.N) * tau2
            for model in family]


def _outcomes(family: ModelFamily, thresholds: list[float],
              y: np.ndarray) -> list["TestOutcome"]:
    outcomes = []
    for model, threshold in zip(family, thresholds):
        statistic = model.residual_sq(y)
        outcomes.append(TestOutcome(model.model_id, statistic, threshold,
                                    statistic <= threshold))
    return outcomes


@dataclass(frozen=True)
class TestOutcome:
    """Result of the goodness-of-fit test of one model.

    The hypothesis ``f in S_m`` is accepted if and only if
    ``statistic <= threshold``, where the statistic is the squared
    distance ``||y - P_m y||^2`` and the threshold
    ``q(0, N_m, alpha) * tau2``. The full model always has statistic
    and threshold zero.
    """

    __test__ = False

    model_id: str
    statistic: float
    threshold: float
    accepted: bool


@dataclass(frozen=True)
class ModelRecord:
    """Data independent radius of a model together with its test
    decision for one observation.
    """

    model_id: str
    D: int
    rho_sq: float
    accepted: bool


@dataclass(frozen=True)
class ConfidenceBall:
    """Euclidean ball ``B(center, sqrt(radius_sq))`` that contains the
    mean vector with probability at least ``nominal_coverage``.

    :param selected: Id of the selected model, the accepted model with
        the smallest radius.
    :param center: Projection of the observation onto the selected
        model.
    :param radius_sq: Squared radius of the selected model.
    :param nominal_coverage: Guaranteed coverage ``1 - beta``.
    :param per_model: Radius and test decision of every model, in
        family order.
    :param trivial_radius_sq: Squared radius ``q(0, n, beta) * tau2``
        of the ball centered at the observation.
    """

    selected: str
    center: np.ndarray
    radius_sq: float
    nominal_coverage: float
    per_model: tuple[ModelRecord, ...]
    trivial_radius_sq: float

    @property
    def accepted(self) -> list[str]:
        """Ids of all accepted models."""
        return [record.model_id for record in self.per_model
                if record.accepted]

    def contains(self, f: np.ndarray) -> bool:
        """Whether ``||f - center||^2 <= radius_sq``.

        :rtype: bool
        """
        f = force_vector(f, self.center.shape[0])
        diff = f - self.center
        return float(diff @ diff) <= self.radius_sq


class BallBuilder:
    """Builds confidence balls for observations from a fixed model
    family, test level and variance specification.

    The radii of all models are data independent. They are computed
    once on first use and kept in a :class:`~confball.cache.RadiusCache`.

    :param family: Model family containing the full model.
    :type family: ModelFamily
    :param alpha: Level of the goodness-of-fit tests.
    :type alpha: float
    :param variance: Knowledge on the noise variance.
    :type variance: VarianceSpec
    :param beta: Global risk of the construction. Defaults to the risk
        the family was validated with, or to the sum of its levels.,
        defaults to None
    :type beta: float, optional
    :param cache: Cache for the radii. A new one is created if
        ``None``., defaults to None
    :type cache: RadiusCache, optional
    """

    def __init__(
        self,
        family: ModelFamily,
        alpha: float,
        variance: VarianceSpec,
        beta: Optional[float] = None,
        cache: Optional[RadiusCache] = None,
    ):
        if beta is None:
            beta = family.beta
        if beta is None:
            beta = min(math.fsum(family.levels()), 1.0 - 1e-12)
        self._alpha, self._beta = check_levels(alpha, beta)
        family.validate(self._beta)
        self._family = family
        self._variance = variance
        self._cache = RadiusCache() if cache is None else cache
        self._radii: Optional[list[float]] = None
        self._thresholds = _thresholds(family, self._alpha, variance.tau2)

    @property
    def family(self) -> ModelFamily:
        return self._family

    @property
    def alpha(self) -> float:
        return self._alpha

    @property
    def beta(self) -> float:
        return self._beta

    @property
    def variance(self) -> VarianceSpec:
        return self._variance

    def radii(self) -> list[float]:
        """Squared radii ``rho_m^2`` of all models in family order.

        :rtype: list[float]
        """
        if self._radii is None:
            entries = [(model.D, model.N, model.beta_m)
                       for model in self._family]
            self._radii = self._cache.lookup(entries, self._alpha,
                                             self._variance)
            logger.debug("Radii of %r: %s", self._family, self._radii)
        return list(self._radii)

    def thresholds(self) -> list[float]:
        """Test thresholds ``q(0, N_m, alpha) * tau2`` in family order."""
        return list(self._thresholds)

    def run_tests(self, y: np.ndarray) -> list[TestOutcome]:
        """Runs the goodness-of-fit test of every model on ``y``.

        :type y: np.ndarray
        :rtype: list[TestOutcome]
        """
        return _outcomes(self._family, self._thresholds,
                         force_vector(y, self._family.n))

    def _selection(self, outcomes: list[TestOutcome]) -> int:
        radii = self.radii()
        accepted = [i for i, outcome in enumerate(outcomes)
                    if outcome.accepted]
        return min(accepted,
                   key=lambda i: (radii[i], self._family.models[i].D, i))

    def build(self, y: np.ndarray) -> ConfidenceBall:
        """Builds the confidence ball of the observation ``y``.

        :type y: np.ndarray
        :rtype: ConfidenceBall
        """
        y = force_vector(y, self._family.n)
        outcomes = self.run_tests(y)
        radii = self.radii()
        best = self._selection(outcomes)
        model = self._family.models[best]
        return ConfidenceBall(
            selected=model.model_id,
            center=model.project(y),
            radius_sq=radii[best],
            nominal_coverage=1.0 - self._beta,
            per_model=tuple(
                ModelRecord(m.model_id, m.D, rho_sq, outcome.accepted)
                for m, rho_sq, outcome in zip(self._family, radii, outcomes)
            ),
            trivial_radius_sq=trivial_radius_sq(self._family.n, self._beta,
                                                self._variance),
        )

    def in_intersection(self, f_query: np.ndarray, y: np.ndarray) -> bool:
        """Whether ``f_query`` lies in every ball ``B(P_m y, rho_m)``
        of an accepted model ``m``.

        :rtype: bool
        """
        n = self._family.n
        f_query = force_vector(f_query, n)
        y = force_vector(y, n)
        radii = self.radii()
        for model, outcome, rho_sq in zip(self._family, self.run_tests(y),
                                          radii):
            if not outcome.accepted:
                continue
            diff = f_query - model.project(y)
            if float(diff @ diff) > rho_sq:
                return False
        return True


def _builder(
    family: ModelFamily,
    alpha: float,
    variance: VarianceSpec,
    beta: Optional[float] = None,
) -> BallBuilder:
    return BallBuilder(family, alpha, variance, beta=beta,
                       cache=_SHARED_CACHE)


def run_tests(
    y: np.ndarray,
    family: ModelFamily,
    alpha: float,
    variance: VarianceSpec,
) -> list[TestOutcome]:
    """Runs the goodness-of-fit tests of all models of the family, see
    :meth:`BallBuilder.run_tests`.

    :rtype: list[TestOutcome]
    """
    check_probability("alpha", alpha)
    return _outcomes(family, _thresholds(family, alpha, variance.tau2),
                     force_vector(y, family.n))


def build_ball(
    y: np.ndarray,
    family: ModelFamily,
    alpha: float,
    variance: VarianceSpec,
    beta: Optional[float] = None,
) -> ConfidenceBall:
    """Builds the confidence ball of ``y``: among the models whose test
    accepts, the one with the smallest radius is selected (ties go to
    the smaller dimension, then to the earlier model) and the ball is
    centered at the projection of ``y`` onto it.

    :type y: np.ndarray
    :type family: ModelFamily
    :type alpha: float
    :type variance: VarianceSpec
    :param beta: Global risk, see :class:`BallBuilder`., defaults to
        None
    :type beta: float, optional
    :rtype: ConfidenceBall
    """
    return _builder(family, alpha, variance, beta).build(y)


def in_intersection(
    f_query: np.ndarray,
    y: np.ndarray,
    family: ModelFamily,
    alpha: float,
    variance: VarianceSpec,
) -> bool:
    """See :meth:`BallBuilder.in_intersection`."""
    return _builder(family, alpha, variance).in_intersection(f_query, y)


def _true_variance(variance: VarianceSpec, sigma2: Optional[float]) -> float:
    if sigma2 is None:
        return variance.tau2
    if not sigma2 > 0:
        raise DomainError(f"sigma2 has to be positive, got {sigma2!r}")
    return float(sigma2)


def acceptance_probability(
    model: LinearModel,
    f: np.ndarray,
    alpha: float,
    variance: VarianceSpec,
    sigma2: Optional[float] = None,
) -> float:
    """Exact probability that the test of ``model`` accepts when the
    mean vector is ``f`` and the noise variance ``sigma2``::

        P[chi2(z, N) <= q(0, N, alpha) * tau2 / sigma2]

    with ``z = ||f - P f||^2 / sigma2``.

    :param sigma2: True variance, ``tau2`` if ``None``., defaults to
        None
    :type sigma2: float, optional
    :rtype: float
    """
    check_probability("alpha", alpha)
    if model.is_full:
        return 1.0
    sigma2 = _true_variance(variance, sigma2)
    z = model.residual_sq(f) / sigma2
    threshold = _central_quantile(alpha, model.N) * variance.tau2 / sigma2
    return noncentral_chi2_cdf(threshold, NoncentralChi2(z, model.N))


def radius_guarantee_check(
    family: ModelFamily,
    alpha: float,
    variance: VarianceSpec,
    model_id: str,
    f: np.ndarray,
    replicates: int,
    seed: int,
    sigma2: Optional[float] = None,
) -> float:
    """Estimates ``P[rho_hat <= rho_m]`` for a mean vector ``f`` in the
    model ``m`` by simulation. The probability is at least
    ``1 - alpha`` whenever the true variance lies in the assumed
    interval.

    :type family: ModelFamily
    :type alpha: float
    :type variance: VarianceSpec
    :param model_id: The model ``m`` containing ``f``.
    :type model_id: str
    :type f: np.ndarray
    :param replicates: Number of simulated observations.
    :type replicates: int
    :type seed: int
    :param sigma2: True variance, ``tau2`` if ``None``., defaults to
        None
    :type sigma2: float, optional
    :returns: Fraction of replicates with ``rho_hat <= rho_m``.
    :rtype: float
    :raises: DomainError if ``f`` is not in the model
    """
    if replicates < 1:
        raise DomainError(f"replicates has to be positive, got {replicates}")
    f = force_vector(f, family.n)
    model = family[model_id]
    if model.residual_sq(f) > 1e-8 * max(1.0, float(f @ f)):
        raise DomainError(f"f does not lie in the model {model_id!r}")
    builder = _builder(family, alpha, variance)
    rho_m = builder.radii()[family.index(model_id)]
    sigma = math.sqrt(_true_variance(variance, sigma2))
    rng = np.random.default_rng(seed)
    hits = 0
    for _ in range(replicates):
        y = f + sigma * rng.standard_normal(family.n)
        if builder.build(y).radius_sq <= rho_m + RADIUS_SLACK:
            hits += 1
    return hits / replicates
