import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

import numpy as np
import pandas as pd
from scipy import stats

from confball.core.callback import AbstractCallback
from confball.core.procedure import (
    RADIUS_SLACK,
    BallBuilder,
    run_tests,
)
from confball.errors import DomainError
from confball.models.family import ModelFamily
from confball.models.fourier import fourier_family
from confball.radii.solver import default_solver
from confball.radii.variance import Known, RadiusInputs, VarianceSpec
from confball.scope import check_levels, force_vector, resolve_threads
from confball.sim.functions import FUNCTIONS, gen_data, test_function

logger = logging.getLogger(__name__)

#: Two-sided confidence level of the exact binomial interval whose
#: lower end is reported as ``ci_low``.
CI_LEVEL = 0.98


@dataclass
class SimulationConfig:
    """Parameters of the numerical study of the trigonometric family.

    :param n: Number of observations at ``x_i = i / n``.
    :param alpha: Level of the tests.
    :param beta: Global risk.
    :param K: Number of dyadic levels of the family.
    :param sigma: True noise standard deviation.
    :param replicates: Number of simulated samples per function.
    :param seed: Master seed.
    :param functions: Names of the simulated test functions.
    :param custom: Samples of another mean vector, simulated under the
        name ``"custom"`` in addition to ``functions``.
    :param variance: Variance knowledge used by the procedure,
        ``Known(sigma**2)`` if ``None``.
    :param threads: Number of worker threads, see
        :meth:`~confball.scope.resolve_threads`.
    """

    n: int = 1000
    alpha: float = 0.2
    beta: float = 0.1
    K: int = 8
    sigma: float = 1.0
    replicates: int = 100
    seed: int = 0
    functions: tuple[str, ...] = FUNCTIONS
    custom: Optional[np.ndarray] = field(default=None, repr=False)
    variance: Optional[VarianceSpec] = None
    threads: Optional[int] = None

    def __post_init__(self):
        check_levels(self.alpha, self.beta)
        if self.replicates < 1:
            raise DomainError(f"replicates has to be positive, got "
                              f"{self.replicates}")
        if not self.sigma > 0:
            raise DomainError(f"sigma has to be positive, got {self.sigma}")
        if self.custom is not None:
            self.custom = force_vector(self.custom, self.n)
        if self.variance is None:
            self.variance = Known(self.sigma**2)

    def family(self) -> ModelFamily:
        return fourier_family(self.n, self.K, self.beta)

    def targets(self) -> dict[str, np.ndarray]:
        """Mean vectors to simulate, by name."""
        targets = {name: test_function(name, self.n)
                   for name in self.functions}
        if self.custom is not None:
            targets["custom"] = self.custom
        return targets


@dataclass(frozen=True)
class ReplicateRecord:
    """Outcome of the procedure on one simulated sample.

    ``within`` holds, for every model in family order, whether the
    selected radius is at most the radius of that model.
    """

    function: str
    replicate: int
    seed: int
    smallest_accepted: str
    selected: str
    radius_sq: float
    covered: bool
    in_intersection: bool
    within: tuple[bool, ...]


@dataclass
class Table1Report:
    """Result of :meth:`run_table1`.

    :param table: One row per model with the columns ``m``, ``D``,
        ``rho_sq_over_n`` and, per function, the number of replicates
        whose smallest accepted model is ``m``.
    :param records: All replicate records, grouped by function and in
        replicate order.
    """

    table: pd.DataFrame
    records: list[ReplicateRecord]
    config: SimulationConfig = field(repr=False)

    def records_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame([
            {key: value for key, value in record.__dict__.items()
             if key != "within"}
            for record in self.records
        ])
        return frame

    def coverage(self, function: str) -> float:
        """Fraction of replicates of ``function`` whose ball contains
        the mean vector.
        """
        covered = [r.covered for r in self.records if r.function == function]
        if not covered:
            raise DomainError(f"No records of function {function!r}")
        return float(np.mean(covered))

    def summary(self) -> dict[str, Any]:
        functions = list(dict.fromkeys(r.function for r in self.records))
        return {
            "n": self.config.n,
            "alpha": self.config.alpha,
            "beta": self.config.beta,
            "K": self.config.K,
            "replicates": self.config.replicates,
            "seed": self.config.seed,
            "coverage": {name: self.coverage(name) for name in functions},
        }


def smallest_accepted(
    y: np.ndarray,
    family: ModelFamily,
    alpha: float,
    variance: VarianceSpec,
) -> str:
    """Returns the first model of the family (in family order) whose
    test accepts, which is the full model if no other one does.

    :rtype: str
    """
    for outcome in run_tests(y, family, alpha, variance):
        if outcome.accepted:
            return outcome.model_id
    return family.full_model_id


def _map_ordered(
    task: Callable[[int], Any],
    count: int,
    threads: int,
) -> list[Any]:
    # results come back in index order whatever the number of threads
    if threads <= 1 or count <= 1:
        return [task(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(task, range(count)))


def _replicate_task(
    builder: BallBuilder,
    name: str,
    f: np.ndarray,
    sigma: float,
    streams: list[np.random.SeedSequence],
    seed: int,
) -> Callable[[int], ReplicateRecord]:
    radii = builder.radii()
    family = builder.family

    def task(index: int) -> ReplicateRecord:
        # a fresh generator per function reproduces the same noise,
        # so all functions see common random numbers
        y = gen_data(f, sigma, np.random.default_rng(streams[index]))
        ball = builder.build(y)
        first = next((record.model_id for record in ball.per_model
                      if record.accepted), family.full_model_id)
        return ReplicateRecord(
            function=name,
            replicate=index,
            seed=seed,
            smallest_accepted=first,
            selected=ball.selected,
            radius_sq=ball.radius_sq,
            covered=ball.contains(f),
            in_intersection=builder.in_intersection(f, y),
            within=tuple(ball.radius_sq <= rho + RADIUS_SLACK
                         for rho in radii),
        )

    return task


def run_table1(
    config: Optional[SimulationConfig] = None,
    callbacks: Optional[Sequence[AbstractCallback]] = None,
) -> Table1Report:
    """Simulates ``config.replicates`` samples of every configured
    function, builds their confidence balls over the dyadic
    trigonometric family and counts for every model how often it is
    the smallest accepted one.

    Replicate ``i`` draws its noise from the ``i``-th child of
    ``SeedSequence(config.seed)``, so the report does not depend on the
    number of threads.

    :param config: Defaults to ``SimulationConfig()``., defaults to None
    :type config: SimulationConfig, optional
    :param callbacks: Callbacks notified per function, per replicate
        and at the end., defaults to None
    :type callbacks: Sequence[AbstractCallback], optional
    :rtype: Table1Report
    """
    config = SimulationConfig() if config is None else config
    callbacks = [] if callbacks is None else list(callbacks)
    family = config.family()
    builder = BallBuilder(family, config.alpha, config.variance,
                          config.beta)
    radii = builder.radii()
    streams = np.random.SeedSequence(config.seed).spawn(config.replicates)
    threads = resolve_threads(config.threads)

    table = pd.DataFrame({
        "m": family.ids(),
        "D": family.dims(),
        "rho_sq_over_n": [rho / config.n for rho in radii],
    })
    records: list[ReplicateRecord] = []
    for name, f in config.targets().items():
        for callback in callbacks:
            callback.on_function(name)
        task = _replicate_task(builder, name, f, config.sigma, streams,
                               config.seed)
        results = _map_ordered(task, config.replicates, threads)
        for index, record in enumerate(results):
            for callback in callbacks:
                callback.on_replicate(index, record)
        counts = pd.Series([r.smallest_accepted for r in results])
        table[name] = [int((counts == model_id).sum())
                       for model_id in family.ids()]
        records.extend(results)
    report = Table1Report(table, records, config)
    for callback in callbacks:
        callback.on_study_end(report)
    return report


def coverage_mc(
    f: np.ndarray,
    family: ModelFamily,
    alpha: float,
    variance: VarianceSpec,
    replicates: int,
    seed: int,
    sigma2: Optional[float] = None,
    threads: Optional[int] = None,
    callbacks: Optional[Sequence[AbstractCallback]] = None,
) -> dict[str, Any]:
    """Estimates the coverage ``P[f in B(f_hat, rho_hat)]`` of the
    procedure and the coverage of the intersection of all accepted
    balls by simulation.

    :param f: Mean vector.
    :type f: np.ndarray
    :param family: Model family with its allocated levels.
    :type family: ModelFamily
    :type alpha: float
    :type variance: VarianceSpec
    :type replicates: int
    :type seed: int
    :param sigma2: True variance, ``variance.tau2`` if ``None``.,
        defaults to None
    :type sigma2: float, optional
    :type threads: int, optional
    :type callbacks: Sequence[AbstractCallback], optional
    :returns: Dictionary with the keys ``coverage``,
        ``intersection_coverage``, ``ci_low`` (lower end of the exact
        98% binomial interval of the coverage) and ``replicates``.
    :rtype: dict[str, Any]
    """
    if replicates < 1:
        raise DomainError(f"replicates has to be positive, got {replicates}")
    f = force_vector(f, family.n)
    if sigma2 is None:
        sigma2 = variance.tau2
    builder = BallBuilder(family, alpha, variance)
    streams = np.random.SeedSequence(seed).spawn(replicates)
    task = _replicate_task(builder, "custom", f, math.sqrt(sigma2), streams,
                           seed)
    results = _map_ordered(task, replicates, resolve_threads(threads))
    callbacks = [] if callbacks is None else list(callbacks)
    for index, record in enumerate(results):
        for callback in callbacks:
            callback.on_replicate(index, record)
    covered = sum(record.covered for record in results)
    inside = sum(record.in_intersection for record in results)
    ci = stats.binomtest(covered, replicates).proportion_ci(
        confidence_level=CI_LEVEL, method="exact",
    )
    report = {
        "coverage": covered / replicates,
        "intersection_coverage": inside / replicates,
        "ci_low": float(ci.low),
        "replicates": replicates,
    }
    for callback in callbacks:
        callback.on_study_end(report)
    return report


def alpha_sensitivity(
    alphas: Sequence[float],
    config: Optional[SimulationConfig] = None,
    model_id: str = "2",
) -> pd.DataFrame:
    """Normalized squared radius ``rho_m^2 / n`` of one model of the
    trigonometric family for several test levels.

    :param alphas: Test levels.
    :type alphas: Sequence[float]
    :param config: Provides ``n``, ``beta``, ``K`` and the variance.,
        defaults to None
    :type config: SimulationConfig, optional
    :param model_id: Model of the family., defaults to "2"
    :type model_id: str, optional
    :returns: Table with the columns ``alpha`` and ``rho_sq_over_n``.
    :rtype: pd.DataFrame
    """
    config = SimulationConfig() if config is None else config
    model = config.family()[model_id]
    solver = default_solver()
    values = []
    for alpha in alphas:
        check_levels(alpha, config.beta)
        rho_sq = solver.rho_sq(RadiusInputs(model.D, model.N, alpha,
                                            model.beta_m, config.variance))
        values.append(rho_sq / config.n)
    return pd.DataFrame({"alpha": list(alphas), "rho_sq_over_n": values})
