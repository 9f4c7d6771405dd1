from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import linalg

from confball.errors import DimensionError, DomainError
from confball.scope import check_probability, force_vector

#: Maximal deviation of ``B^T B`` from the identity.
ORTHONORMAL_TOL = 1e-10
#: Relative size of a pivot below which a column counts as dependent.
RANK_TOL = 1e-10


def orthonormalize(raw_basis: np.ndarray) -> np.ndarray:
    """Returns an orthonormal basis of the column span of the given
    matrix, computed by a Householder QR decomposition with column
    pivoting. Columns are dropped if their pivot is smaller than
    ``1e-10`` times the largest one, so the number of returned columns
    is the numerical rank.

    :param raw_basis: Two dimensional array of shape ``(n, k)`` with
        ``k <= n``.
    :type raw_basis: np.ndarray
    :returns: Array of shape ``(n, D)``, ``D`` being the rank.
    :rtype: np.ndarray
    """
    raw = np.asarray(raw_basis, dtype=np.float64)
    if raw.ndim == 1:
        raw = raw[:, np.newaxis]
    if raw.ndim != 2:
        raise DimensionError(f"Expected a matrix, got shape {raw.shape}")
    n, k = raw.shape
    if k > n:
        raise DimensionError(f"More columns than rows: {raw.shape}")
    if k == 0 or not np.any(raw):
        return np.zeros((n, 0))
    Q, R, _ = linalg.qr(raw, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    rank = int(np.sum(diag > RANK_TOL * diag[0]))
    return np.ascontiguousarray(Q[:, :rank])


@dataclass(frozen=True)
class LinearModel:
    """A linear subspace ``S`` of ``R^n`` given by an orthonormal basis
    together with the risk ``beta_m`` allocated to it.

    :param model_id: Label of the model inside its family.
    :type model_id: str
    :param basis: Array of shape ``(n, D)`` with orthonormal columns.
        The model keeps a read-only copy.
    :type basis: np.ndarray
    :param beta_m: Allocated risk in ``(0, 1)``.
    :type beta_m: float
    :param support: Column indices of a design matrix spanning the
        model, if it was built from one., defaults to None
    :type support: tuple[int, ...], optional
    """

    model_id: str
    basis: np.ndarray = field(repr=False, compare=False)
    beta_m: float
    support: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        basis = np.array(self.basis, dtype=np.float64)
        if basis.ndim != 2 or basis.shape[1] > basis.shape[0]:
            raise DimensionError(f"Invalid basis shape {basis.shape}")
        gram = basis.T @ basis
        if gram.size and np.max(np.abs(gram - np.eye(gram.shape[0]))) \
                > ORTHONORMAL_TOL:
            raise DomainError(f"Basis of model {self.model_id!r} is not "
                              f"orthonormal, use orthonormalize first")
        check_probability("beta_m", self.beta_m)
        basis.setflags(write=False)
        object.__setattr__(self, "model_id", str(self.model_id))
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "beta_m", float(self.beta_m))

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    @property
    def D(self) -> int:
        return self.basis.shape[1]

    @property
    def N(self) -> int:
        return self.n - self.D

    @property
    def is_full(self) -> bool:
        return self.D == self.n

    def coefficients(self, y: np.ndarray) -> np.ndarray:
        """Returns ``B^T y``."""
        return self.basis.T @ force_vector(y, self.n)

    def project(self, y: np.ndarray) -> np.ndarray:
        """Orthogonal projection ``B B^T y`` of ``y`` onto the model.

        :type y: np.ndarray
        :rtype: np.ndarray
        """
        y = force_vector(y, self.n)
        if self.is_full:
            return y.copy()
        if self.D == 0:
            return np.zeros(self.n)
        return self.basis @ (self.basis.T @ y)

    def residual_sq(self, y: np.ndarray) -> float:
        """Squared distance ``||y - P y||^2`` of ``y`` to the model,
        computed as ``||y||^2 - ||B^T y||^2`` and clamped at zero.

        :rtype: float
        """
        y = force_vector(y, self.n)
        if self.is_full:
            return 0.0
        coef = self.basis.T @ y
        return max(float(y @ y - coef @ coef), 0.0)

    def with_level(self, beta_m: float) -> "LinearModel":
        """Returns a copy of the model with another allocated risk."""
        return LinearModel(self.model_id, self.basis, beta_m, self.support)


def project(model: LinearModel, y: np.ndarray) -> np.ndarray:
    """Orthogonal projection of ``y`` onto ``model``, see
    :meth:`LinearModel.project`.
    """
    return model.project(y)


def zero_model(n: int, beta_m: float, model_id: str = "0") -> LinearModel:
    """The model ``S = {0}`` of dimension zero."""
    return LinearModel(model_id, np.zeros((n, 0)), beta_m)


def full_model(n: int, beta_m: float,
               model_id: Optional[str] = None) -> LinearModel:
    """The model ``S = R^n``, labelled ``str(n)`` by default."""
    return LinearModel(str(n) if model_id is None else model_id,
                       np.eye(n), beta_m)
