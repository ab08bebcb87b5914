"""Regularization path fits under the different screening strategies."""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass

import numpy as np

from .data import DataError, Dataset, PathSpec
from .screening import ScreenMask, Source, active_warm_start_set, lookahead_screen
from .solver import NonConvergenceError, SolverState, Tolerances, null_state, solve


class Strategy(str, enum.Enum):
    NONE = "none"
    GAP_SAFE_AWS = "gap_safe_aws"
    GAP_SAFE_AWS_LOOKAHEAD = "gap_safe_aws_lookahead"


class StopReason(str, enum.Enum):
    GRID_EXHAUSTED = "grid_exhausted"
    DEV_RATIO = "dev_ratio"
    DEV_FRACTION = "dev_fraction"
    ACTIVE_BOUND = "active_bound"
    NONCONVERGENCE = "nonconvergence"


@dataclass
class PathResult:
    betas: np.ndarray  # p x K_done
    lambdas: np.ndarray  # realized grid prefix
    dev_ratios: np.ndarray
    gaps: np.ndarray
    infeas: np.ndarray
    mask: ScreenMask  # p x K (full grid)
    passes: np.ndarray
    coord_updates: np.ndarray
    wall_times: np.ndarray
    stop_reason: StopReason
    strategy: Strategy = Strategy.NONE

    @property
    def steps_done(self) -> int:
        return len(self.lambdas)

    @property
    def n_active(self) -> np.ndarray:
        return np.count_nonzero(self.betas, axis=0)

    def n_screened(self, source: Source) -> np.ndarray:
        return np.array([self.mask.count(k, source) for k in range(self.steps_done)])

    @property
    def total_time(self) -> float:
        return float(self.wall_times.sum())


def deviance_ratio(beta, data: Dataset) -> float:
    """Fraction of the null deviance explained, 1 - ||y - X beta||^2 / ||y||^2."""
    null_dev = float(data.y @ data.y)
    if null_dev == 0:
        raise DataError("degenerate response: ||y|| = 0")
    r = data.y - data.X @ beta
    return 1.0 - float(r @ r) / null_dev


def _stop_reason(k, dev_ratios, n_active, spec: PathSpec):
    dr = dev_ratios[k]
    if dr >= spec.dev_ratio_stop:
        return StopReason.DEV_RATIO
    if k >= 2 and dr > 0 and (dr - dev_ratios[k - 1]) / dr < spec.dev_frac_stop:
        return StopReason.DEV_FRACTION
    if spec.active_stop is not None and n_active >= spec.active_stop:
        return StopReason.ACTIVE_BOUND
    return None


def fit_path(
    data: Dataset,
    spec: PathSpec,
    strategy: Strategy | str = Strategy.GAP_SAFE_AWS_LOOKAHEAD,
    tol: Tolerances = Tolerances(),
) -> PathResult:
    """Fit the lasso over ``spec.lambdas`` with warm starts.

    Step 0 is the null model at lambda_max and is emitted without calling
    the solver. With ``gap_safe_aws_lookahead`` the look-ahead rule runs on
    every converged step (step 0 included) and the discards it certifies
    are withheld from all later solves.

    Raises
    ------
    NonConvergenceError
        With ``step`` set to the failing step and ``partial`` holding the
        steps completed before it (stop reason ``nonconvergence``).
    """
    strategy = Strategy(strategy)
    if not np.isclose(spec.lam_max, data.lam_max, rtol=1e-10):
        raise ValueError("path grid was not built from this data's lambda_max")
    K = len(spec)
    p = data.p
    mask = ScreenMask(p, K)
    screening = strategy is not Strategy.NONE
    lookahead = strategy is Strategy.GAP_SAFE_AWS_LOOKAHEAD

    betas, dev_ratios, gaps, infeas = [], [], [], []
    passes, updates, wall = [], [], []
    reason = StopReason.GRID_EXHAUSTED
    state: SolverState | None = None

    def result(reason):
        return PathResult(
            betas=np.column_stack(betas) if betas else np.zeros((p, 0)),
            lambdas=spec.lambdas[: len(betas)].copy(),
            dev_ratios=np.array(dev_ratios),
            gaps=np.array(gaps),
            infeas=np.array(infeas),
            mask=mask,
            passes=np.array(passes, dtype=np.int64),
            coord_updates=np.array(updates, dtype=np.int64),
            wall_times=np.array(wall),
            stop_reason=reason,
            strategy=strategy,
        )

    for k, lam in enumerate(spec.lambdas):
        t0 = time.perf_counter()
        if k == 0:
            state = null_state(data, lam)
        else:
            warm = state.copy()
            warm.passes = warm.coord_updates = 0
            if screening:
                warm.working = active_warm_start_set(state)
            else:
                warm.working = np.arange(p)
            try:
                state = solve(
                    data,
                    lam,
                    warm=warm,
                    mask=mask.step(k) if lookahead else None,
                    tol=tol,
                    dynamic_screen=screening,
                )
            except NonConvergenceError as exc:
                exc.step = k
                exc.args = (f"step {k}: {exc.args[0]}",)
                exc.partial = result(StopReason.NONCONVERGENCE)
                raise
            if screening:
                mask.mark(np.flatnonzero(state.screened), k, Source.GAP_SAFE_DYNAMIC)
        if lookahead and k + 1 < K:
            lookahead_screen(state, spec, mask, data, k)
        wall.append(time.perf_counter() - t0)

        betas.append(state.beta.copy())
        dev_ratios.append(1.0 - float(state.residual @ state.residual) / (2 * data.null_primal))
        gaps.append(state.gap)
        infeas.append(state.infeas)
        passes.append(state.passes)
        updates.append(state.coord_updates)

        stop = _stop_reason(k, dev_ratios, np.count_nonzero(state.beta), spec)
        if stop is not None:
            reason = stop
            break

    return result(reason)
