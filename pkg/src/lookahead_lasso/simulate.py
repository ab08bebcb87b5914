"""Synthetic Gaussian designs with a sparse signal at a target SNR."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SimSpec:
    """Simulation settings.

    ``rho = 0`` gives an identity covariance; otherwise the predictors
    follow an AR(1) structure with ``Sigma[i, j] = rho ** |i - j|``.
    """

    n: int
    p: int
    k_signals: int = 5
    snr: float = 1.0
    rho: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.p < 1:
            raise ValueError("n and p must be positive")
        if not 1 <= self.k_signals <= self.p:
            raise ValueError(f"need 1 <= k_signals <= p, got k={self.k_signals}, p={self.p}")
        if not self.snr > 0:
            raise ValueError("snr must be positive")
        if not 0 <= self.rho < 1:
            raise ValueError("rho must lie in [0, 1)")


def true_beta(p: int, k: int) -> np.ndarray:
    """``k`` unit coefficients spread evenly over ``p`` positions.

    Signal i (1-based) sits at index ``round(i * p / k) - 1``, rounding
    halves up, so the last signal is always at ``p - 1``.
    """
    if not 1 <= k <= p:
        raise ValueError(f"need 1 <= k <= p, got k={k}, p={p}")
    idx = np.floor(np.arange(1, k + 1) * p / k + 0.5).astype(np.int64) - 1
    beta = np.zeros(p)
    beta[idx] = 1.0
    return beta


def signal_variance(beta, rho: float = 0.0) -> float:
    """beta^T Sigma beta for the AR(1) covariance (identity when rho = 0)."""
    support = np.flatnonzero(beta)
    b = beta[support]
    if rho == 0:
        return float(b @ b)
    lags = np.abs(support[:, None] - support[None, :])
    return float(b @ (rho**lags) @ b)


def rng_for(seed: int, stream: int = 0) -> np.random.Generator:
    """Independent PCG64 stream for a (seed, stream) pair."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream,))))


def generate(spec: SimSpec, stream: int = 0):
    """Draw ``(X, y, beta, sigma2)``.

    Rows of X are i.i.d. N(0, Sigma) and y ~ N(X beta, sigma2 I) with
    ``sigma2 = beta^T Sigma beta / snr``. AR(1) rows are built by the
    recursion x_t = rho x_{t-1} + sqrt(1 - rho^2) z_t, so no p x p factor
    is formed.
    """
    rng = rng_for(spec.seed, stream)
    X = rng.standard_normal((spec.n, spec.p))
    if spec.rho > 0:
        c = np.sqrt(1.0 - spec.rho**2)
        for t in range(1, spec.p):
            X[:, t] = spec.rho * X[:, t - 1] + c * X[:, t]
    beta = true_beta(spec.p, spec.k_signals)
    sigma2 = signal_variance(beta, spec.rho) / spec.snr
    y = X @ beta + np.sqrt(sigma2) * rng.standard_normal(spec.n)
    return X, y, beta, sigma2
