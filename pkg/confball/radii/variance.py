from dataclasses import dataclass

from confball.errors import DomainError
from confball.scope import check_probability


class VarianceSpec:
    """Prior knowledge on the noise variance: ``sigma^2`` lies in the
    interval ``[(1 - eta) * tau2, tau2]``.

    Use one of the two subclasses :class:`Known` (``eta = 0``) and
    :class:`Interval`. Both expose the attributes ``tau2`` and ``eta``,
    so every computation treats ``Known(s)`` exactly like
    ``Interval(tau2=s, eta=0)``.
    """

    tau2: float
    eta: float

    @property
    def is_known(self) -> bool:
        """``True`` if the interval reduces to a single point."""
        return self.eta == 0

    def bounds(self) -> tuple[float, float]:
        """Returns the interval of admissible variances.

        :rtype: tuple[float, float]
        """
        return (1.0 - self.eta) * self.tau2, self.tau2

    def contains(self, sigma2: float) -> bool:
        lo, hi = self.bounds()
        return lo <= sigma2 <= hi


@dataclass(frozen=True)
class Known(VarianceSpec):
    """Exactly known noise variance.

    :param sigma2: Variance, ``sigma2 > 0``.
    :type sigma2: float
    """

    sigma2: float

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise DomainError(f"sigma2 has to be positive, got "
                              f"{self.sigma2!r}")

    @property
    def tau2(self) -> float:
        return self.sigma2

    @property
    def eta(self) -> float:
        return 0.0


@dataclass(frozen=True)
class Interval(VarianceSpec):
    """Noise variance known up to the interval
    ``[(1 - eta) * tau2, tau2]``.

    :param tau2: Upper bound of the variance, ``tau2 > 0``.
    :type tau2: float
    :param eta: Relative width of the interval, ``0 <= eta < 1``.
    :type eta: float
    """

    tau2: float
    eta: float

    def __post_init__(self):
        if not self.tau2 > 0:
            raise DomainError(f"tau2 has to be positive, got {self.tau2!r}")
        if not 0.0 <= self.eta < 1.0:
            raise DomainError(f"eta has to satisfy 0 <= eta < 1, got "
                              f"{self.eta!r}")


@dataclass(frozen=True)
class RadiusInputs:
    """Data-independent description of one model as seen by the radius
    functionals.

    :param D: Dimension of the model.
    :type D: int
    :param N: Residual dimension ``n - D``.
    :type N: int
    :param alpha: Level of the goodness-of-fit test.
    :type alpha: float
    :param beta_m: Risk allocated to the model.
    :type beta_m: float
    :param variance: Knowledge on the noise variance.
    :type variance: VarianceSpec
    """

    D: int
    N: int
    alpha: float
    beta_m: float
    variance: VarianceSpec

    def __post_init__(self):
        if self.D < 0 or self.N < 0 or self.D + self.N < 1:
            raise DomainError(f"Invalid dimensions D={self.D}, N={self.N}")
        check_probability("alpha", self.alpha)
        check_probability("beta_m", self.beta_m)
        if not isinstance(self.variance, VarianceSpec):
            raise DomainError(f"Unknown variance specification "
                              f"{self.variance!r}")

    @property
    def n(self) -> int:
        return self.D + self.N

    @property
    def is_full_model(self) -> bool:
        return self.N == 0
