import threading
from typing import Optional, Protocol, Sequence

from confball.radii.solver import RadiusSolver, default_solver
from confball.radii.variance import VarianceSpec


def radius_key(
    D: int,
    N: int,
    beta_m: float,
    alpha: float,
    variance: VarianceSpec,
    settings: tuple = (),
) -> str:
    """Key under which the squared radius of a model is cached. Keys
    differ whenever the solver ``settings`` differ.
    """
    key = (f"{int(D)}:{int(N)}:{float(beta_m)!r}:{float(alpha)!r}:"
           f"{float(variance.tau2)!r}:{float(variance.eta)!r}")
    if settings:
        key += ":" + ":".join(repr(value) for value in settings)
    return key


class Cache(Protocol):
    """Protocol for classes that cache data independent results of a
    confidence ball construction, accessible by a string key.
    """

    cache: dict[str, float]

    def get(self, key: str) -> float:
        ...

    def process(
        self,
        entries: Sequence[tuple[int, int, float]],
        alpha: float,
        variance: VarianceSpec,
    ) -> None:
        ...


class RadiusCache:
    """Class that matches the :class:`~confball.cache.Cache` protocol
    and stores the squared radii of models. Radii don't depend on the
    observation, so one cache serves every replicate of a simulation.

    :param solver: Solver computing missing radii. The module-wide
        default solver is used if ``None``., defaults to None
    :type solver: RadiusSolver, optional
    :param max_workers: Threads used when several radii are missing.,
        defaults to None
    :type max_workers: int, optional
    """

    cache: dict[str, float]

    def __init__(
        self,
        solver: Optional[RadiusSolver] = None,
        max_workers: Optional[int] = None,
    ):
        self.cache = dict()
        self._solver = default_solver() if solver is None else solver
        self._max_workers = max_workers
        self._lock = threading.Lock()

    def key(
        self,
        entry: tuple[int, int, float],
        alpha: float,
        variance: VarianceSpec,
    ) -> str:
        """Cache key of an entry ``(D, N, beta_m)`` under the current
        settings of the solver.
        """
        return radius_key(*entry, alpha, variance, self._solver.settings)

    def get(self, key: str) -> float:
        """Returns the cached squared radius.

        :rtype: float
        """
        return self.cache[key]

    def process(
        self,
        entries: Sequence[tuple[int, int, float]],
        alpha: float,
        variance: VarianceSpec,
    ) -> None:
        """Computes and caches the squared radii of all entries
        ``(D, N, beta_m)`` that are not cached yet.

        :type entries: Sequence[tuple[int, int, float]]
        :type alpha: float
        :type variance: VarianceSpec
        """
        with self._lock:
            missing = [entry for entry in entries
                       if self.key(entry, alpha, variance)
                       not in self.cache]
            if not missing:
                return
            values = self._solver.radius_table(missing, alpha, variance,
                                               self._max_workers)
            for entry, value in zip(missing, values):
                self.cache[self.key(entry, alpha, variance)] = value

    def lookup(
        self,
        entries: Sequence[tuple[int, int, float]],
        alpha: float,
        variance: VarianceSpec,
    ) -> list[float]:
        """Returns the squared radii of the entries, computing them
        first if necessary.

        :rtype: list[float]
        """
        self.process(entries, alpha, variance)
        return [self.cache[self.key(entry, alpha, variance)]
                for entry in entries]

    def __getitem__(self, key: str) -> float:
        return self.get(key)

    def __len__(self) -> int:
        return len(self.cache)
