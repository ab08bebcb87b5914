"""Problem data: standardization, lambda_max and the penalty grid."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _kernels


class DataError(ValueError):
    """Raised for malformed or degenerate input data."""


@dataclass(frozen=True, eq=False)
class Dataset:
    """Standardized lasso problem data.

    ``X`` is stored column-major (Fortran order) since both coordinate
    descent and screening stream whole columns.
    """

    X: np.ndarray
    y: np.ndarray
    col_norms: np.ndarray = field(init=False)
    col_norms_sq: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        X = np.asfortranarray(self.X, dtype=np.float64)
        y = np.ascontiguousarray(self.y, dtype=np.float64)
        if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
            raise DataError(
                f"dimension mismatch: X has shape {X.shape}, y has shape {y.shape}"
            )
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        norms_sq = np.einsum("ij,ij->j", X, X)
        object.__setattr__(self, "col_norms_sq", norms_sq)
        object.__setattr__(self, "col_norms", np.sqrt(norms_sq))

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    @cached_property
    def null_primal(self) -> float:
        """Primal objective of the all-zero model, 0.5 * ||y||^2."""
        return 0.5 * float(self.y @ self.y)

    @cached_property
    def lam_max(self) -> float:
        return lambda_max(self)


@dataclass(frozen=True)
class StandardizeInfo:
    y_mean: float
    x_means: np.ndarray
    x_scales: np.ndarray
    dropped: list[int]

    @property
    def kept(self) -> np.ndarray:
        """Original column indices of the retained predictors."""
        mask = np.ones(len(self.x_means), dtype=bool)
        mask[self.dropped] = False
        return np.flatnonzero(mask)

    def expand(self, beta: np.ndarray) -> np.ndarray:
        """Map coefficients back to the original column layout.

        Dropped columns get a zero coefficient. Coefficients stay on the
        standardized scale.
        """
        beta = np.asarray(beta)
        out = np.zeros((len(self.x_means),) + beta.shape[1:])
        out[self.kept] = beta
        return out


@dataclass(frozen=True)
class PathSpec:
    lambdas: np.ndarray
    eps: float
    dev_ratio_stop: float = 0.999
    dev_frac_stop: float = 1e-5
    active_stop: int | None = None

    @property
    def lam_max(self) -> float:
        return float(self.lambdas[0])

    def __len__(self) -> int:
        return len(self.lambdas)


def standardize(raw_X, raw_y) -> tuple[Dataset, StandardizeInfo]:
    """Center ``y``; center and scale the columns of ``X``.

    Scaling uses the uncorrected (1/n) standard deviation so every retained
    column ends up with squared norm ``n``. Zero-variance columns are
    dropped and recorded in ``StandardizeInfo.dropped``.
    """
    X = np.asarray(raw_X, dtype=np.float64)
    y = np.asarray(raw_y, dtype=np.float64)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
        raise DataError(
            f"dimension mismatch: X has shape {X.shape}, y has shape {y.shape}"
        )
    n = X.shape[0]
    if n < 2:
        raise DataError(f"need at least 2 observations, got {n}")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise DataError("non-finite values in input")

    x_means = X.mean(axis=0)
    Xc = X - x_means
    x_scales = np.sqrt(np.mean(Xc**2, axis=0))
    # constant columns leave only round-off after centering
    magnitude = np.maximum(np.abs(X).max(axis=0, initial=0.0), np.finfo(float).tiny)
    zero_var = x_scales <= 1e-12 * magnitude
    dropped = [int(j) for j in np.flatnonzero(zero_var)]
    if zero_var.all():
        raise DataError("empty design: every column has zero variance")

    keep = ~zero_var
    Xs = Xc[:, keep] / x_scales[keep]
    y_mean = float(y.mean())

    info = StandardizeInfo(
        y_mean=y_mean,
        x_means=x_means,
        x_scales=np.where(zero_var, 0.0, x_scales),
        dropped=dropped,
    )
    return Dataset(Xs, y - y_mean), info


def lambda_max(data: Dataset) -> float:
    """Smallest penalty at which the all-zero model is optimal."""
    # same summation order as the coordinate updates, so beta = 0 is exact here
    out = np.empty(data.p)
    lam = float(_kernels.correlations(data.X, data.y, np.arange(data.p), out))
    if not lam > 0:
        raise DataError("degenerate response: X^T y is zero, lambda_max = 0")
    return lam


def lambda_grid(lam_max: float, eps: float, K: int = 100) -> PathSpec:
    """Log-spaced grid of ``K`` penalties from ``lam_max`` down to ``eps * lam_max``."""
    if not lam_max > 0:
        raise ValueError(f"lam_max must be positive, got {lam_max}")
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if K < 2:
        raise ValueError(f"need at least 2 grid points, got {K}")
    lambdas = lam_max * eps ** (np.arange(K) / (K - 1))
    lambdas[0] = lam_max
    lambdas[-1] = eps * lam_max
    return PathSpec(lambdas=lambdas, eps=eps)


def default_eps(n: int, p: int) -> float:
    return 1e-2 if p > n else 1e-4


def path_spec(data: Dataset, K: int = 100, eps: float | None = None, **stops) -> PathSpec:
    """Grid with the usual defaults for this data's shape.

    ``eps`` defaults to 1e-2 when p > n and 1e-4 otherwise. The active-count
    stop is set to ``n`` when p >= n.
    """
    if eps is None:
        eps = default_eps(data.n, data.p)
    grid = lambda_grid(data.lam_max, eps, K)
    stops.setdefault("active_stop", data.n if data.p >= data.n else None)
    return PathSpec(lambdas=grid.lambdas, eps=eps, **stops)
