"""Cyclic coordinate descent for the lasso at a fixed penalty.

The objective is ``0.5 * ||y - X beta||^2 + lam * ||beta||_1``. Convergence
is certified by the duality gap (relative to the null primal
``0.5 * ||y||^2``) and by the infeasibility ``max_j |x_j^T r| - lam``
(relative to ``lambda_max``). Both are evaluated at checkpoints, every
``screen_every`` passes, where dynamic Gap Safe screening can also shrink
the working set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .data import Dataset


class NonConvergenceError(RuntimeError):
    """The solver hit ``max_passes`` before certifying convergence.

    The last state is kept in ``state``. Path fits fill in ``step`` and
    ``partial``, the result over the steps completed before the failure.
    """

    def __init__(self, message, state=None, step=None):
        super().__init__(message)
        self.state = state
        self.step = step
        self.partial = None


@dataclass(frozen=True)
class Tolerances:
    gap_frac: float = 1e-6
    infeas_frac: float = 1e-5
    max_passes: int = 100_000
    screen_every: int = 10

    def __post_init__(self):
        if not (self.gap_frac > 0 and self.infeas_frac > 0):
            raise ValueError("tolerances must be positive")
        if self.max_passes < 1 or self.screen_every < 1:
            raise ValueError("max_passes and screen_every must be positive")


@dataclass
class SolverState:
    """Iterate of the solver plus its latest convergence certificate.

    ``correlation`` holds ``X^T residual`` from the last checkpoint and
    ``scale`` the dual-scaling factor, so ``|x_j^T theta|`` is
    ``|correlation[j]| / scale``. ``screened`` flags predictors removed by
    dynamic screening during the current solve.
    """

    beta: np.ndarray
    residual: np.ndarray
    theta: np.ndarray
    gap: float = math.inf
    infeas: float = math.inf
    working: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    passes: int = 0
    coord_updates: int = 0
    correlation: np.ndarray | None = None
    scale: float = math.nan
    screened: np.ndarray | None = None

    @classmethod
    def null(cls, data: Dataset, working=None) -> SolverState:
        """All-zero state; the working set defaults to every predictor."""
        if working is None:
            working = np.arange(data.p)
        return cls(
            beta=np.zeros(data.p),
            residual=data.y.copy(),
            theta=np.zeros(data.n),
            working=np.asarray(working, dtype=np.int64),
        )

    def copy(self) -> SolverState:
        return replace(
            self,
            beta=self.beta.copy(),
            residual=self.residual.copy(),
            theta=self.theta.copy(),
            working=self.working.copy(),
            correlation=None if self.correlation is None else self.correlation.copy(),
            screened=None if self.screened is None else self.screened.copy(),
        )

    @property
    def active(self) -> np.ndarray:
        return np.flatnonzero(self.beta)


def soft_threshold(z: float, gamma: float) -> float:
    """sign(z) * max(|z| - gamma, 0)."""
    if gamma < 0:
        raise ValueError("threshold must be nonnegative")
    return float(_kernels.soft_threshold(float(z), float(gamma)))


def cd_pass(state: SolverState, data: Dataset, lam: float) -> SolverState:
    """One cyclic sweep over ``state.working`` in index order (in place)."""
    working = np.sort(state.working)
    _kernels.cd_sweeps(
        data.X, state.beta, state.residual, working, data.col_norms_sq, float(lam), 1
    )
    state.passes += 1
    state.coord_updates += len(working)
    return state


def primal_objective(beta, data: Dataset, lam: float) -> float:
    r = data.y - data.X @ beta
    return 0.5 * float(r @ r) + lam * float(np.abs(beta).sum())


def dual_objective(theta, data: Dataset, lam: float) -> float:
    d = theta - data.y / lam
    return 0.5 * float(data.y @ data.y) - 0.5 * lam**2 * float(d @ d)


def _gap(r_sq, l1, theta_y, theta_sq, lam):
    return 0.5 * r_sq + lam * l1 - lam * theta_y + 0.5 * lam**2 * theta_sq


def _xtr(data: Dataset, residual):
    """X^T residual and its largest magnitude."""
    out = np.empty(data.p)
    top = _kernels.correlations(data.X, np.ascontiguousarray(residual, dtype=np.float64),
                                np.arange(data.p), out)
    return out, float(top)


def dual_point(residual, data: Dataset, lam: float) -> np.ndarray:
    """Dual-feasible point obtained by rescaling the residual."""
    scale = max(_xtr(data, residual)[1], lam)
    return residual / scale


def duality_gap(beta, theta, data: Dataset, lam: float) -> float:
    r = data.y - data.X @ beta
    return _gap(
        float(r @ r),
        float(np.abs(beta).sum()),
        float(theta @ data.y),
        float(theta @ theta),
        lam,
    )


def infeasibility(residual, data: Dataset, lam: float) -> float:
    return _xtr(data, residual)[1] - lam


def null_state(data: Dataset, lam: float | None = None) -> SolverState:
    """Certified solution at ``lam`` (default lambda_max) with beta = 0."""
    if lam is None:
        lam = data.lam_max
    if lam < data.lam_max:
        raise ValueError("beta = 0 is only optimal for lam >= lambda_max")
    corr, top = _xtr(data, data.y)
    scale = max(top, lam)
    theta = data.y / scale
    state = SolverState.null(data, working=np.empty(0, dtype=np.int64))
    state.theta = theta
    state.correlation = corr
    state.scale = scale
    state.gap = max(duality_gap(state.beta, theta, data, lam), 0.0)
    state.infeas = top - lam
    state.screened = np.zeros(data.p, dtype=bool)
    return state


def solve(
    data: Dataset,
    lam: float,
    warm: SolverState | None = None,
    mask=None,
    tol: Tolerances = Tolerances(),
    dynamic_screen: bool = False,
) -> SolverState:
    """Solve the lasso at ``lam`` by cyclic coordinate descent.

    Parameters
    ----------
    data : Dataset
    lam : float
        Penalty, positive.
    warm : SolverState, optional
        Starting point; its ``working`` array is the initial working set.
        Left untouched. Defaults to the zero state over all predictors.
    mask : bool array of length p, optional
        Predictors certified to be zero at ``lam``. They are fixed at zero
        and never updated.
    tol : Tolerances
    dynamic_screen : bool
        Apply the Gap Safe test at each checkpoint and drop certified
        predictors. After the first checkpoint the working set is every
        predictor that is neither masked nor screened.

    Returns
    -------
    SolverState
        Converged state whose certificates (``theta``, ``gap``,
        ``infeas``) refer to the full problem over all p predictors.

    Raises
    ------
    NonConvergenceError
        If ``tol.max_passes`` sweeps do not reach the tolerances.
    """
    if not lam > 0:
        raise ValueError(f"lam must be positive, got {lam}")
    p = data.p
    X, y, norms_sq = data.X, data.y, data.col_norms_sq
    state = SolverState.null(data) if warm is None else warm.copy()

    excluded = np.zeros(p, dtype=bool) if mask is None else np.array(mask, dtype=bool)
    screened = np.zeros(p, dtype=bool)
    if np.any(state.beta[excluded] != 0):
        state.beta[excluded] = 0.0
    # the warm residual may be stale after zeroing or a foreign warm start
    _kernels.refresh_residual(X, y, state.beta, state.residual)

    candidates = np.flatnonzero(~excluded)
    working = np.sort(np.intersect1d(state.working, candidates)).astype(np.int64)
    corr = np.zeros(p)
    gap_tol = tol.gap_frac * data.null_primal
    infeas_tol = tol.infeas_frac * data.lam_max

    while True:
        n_passes = min(tol.screen_every, tol.max_passes - state.passes)
        if n_passes <= 0:
            state.working = working
            raise NonConvergenceError(
                f"no convergence within {tol.max_passes} passes at lam={lam:.6g}"
                f" (gap={state.gap:.3g}, infeas={state.infeas:.3g})",
                state=state,
            )
        _kernels.cd_sweeps(X, state.beta, state.residual, working, norms_sq, lam, n_passes)
        state.passes += n_passes
        state.coord_updates += n_passes * len(working)

        # checkpoint
        r = state.residual
        _kernels.refresh_residual(X, y, state.beta, r)
        top = _kernels.correlations(X, r, candidates, corr)
        r_sq = float(r @ r)
        l1 = float(np.abs(state.beta).sum())
        r_y = float(r @ y)

        def certify(top):
            scale = max(top, lam)
            gap = _gap(r_sq, l1, r_y / scale, r_sq / scale**2, lam)
            return scale, gap, top - lam

        scale, gap, infeas = certify(top)
        outside = np.flatnonzero(excluded | screened)
        if gap <= gap_tol and infeas <= infeas_tol and len(outside):
            # certificates must hold for the full problem
            top = max(top, _kernels.correlations(X, r, outside, corr))
            scale, gap, infeas = certify(top)

        state.scale = scale
        state.gap = gap
        state.infeas = infeas
        if gap <= gap_tol and infeas <= infeas_tol:
            state.theta = r / scale
            state.correlation = corr
            state.screened = screened
            state.working = working
            return state

        if dynamic_screen:
            radius = math.sqrt(2.0 * max(gap, 0.0)) / lam
            c = candidates
            drop = c[np.abs(corr[c]) / scale + data.col_norms[c] * radius < 1.0]
            if len(drop):
                screened[drop] = True
                nz = drop[state.beta[drop] != 0]
                if len(nz):
                    state.residual += X[:, nz] @ state.beta[nz]
                    state.beta[nz] = 0.0
                candidates = np.flatnonzero(~(excluded | screened))
        working = candidates
