"""Gap Safe screening and look-ahead discard intervals.

The Gap Safe sphere test at a target penalty ``t`` discards predictor j when

    |x_j^T theta| + ||x_j|| * sqrt(2 * G(beta, theta; t)) / t < 1,

with ``theta`` any dual-feasible point. ``G(beta, theta; t)`` is quadratic
in ``t``, so for a fixed (beta, theta) pair the test squares into
``a t^2 + b t + c > 0`` and the set of penalties at which j is discarded is
an interval that can be computed once and reused along the whole path.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .data import Dataset, PathSpec
from .solver import SolverState


class Source(enum.IntEnum):
    NONE = 0
    GAP_SAFE_DYNAMIC = 1
    LOOK_AHEAD = 2

    @property
    def label(self) -> str:
        return {0: "none", 1: "gap_safe_dynamic", 2: "look_ahead"}[self.value]

    @classmethod
    def from_label(cls, label: str) -> Source:
        return {s.label: s for s in cls}[label]


@dataclass(frozen=True)
class QuadCoeffs:
    a: float
    b: float
    c: float
    slack: float


@dataclass(frozen=True)
class Interval:
    """Penalties ``t`` with ``lo < t < hi``, or ``t == hi`` when ``hi_closed``."""

    lo: float
    hi: float
    hi_closed: bool = True

    @property
    def empty(self) -> bool:
        return not self.lo < self.hi

    def __contains__(self, t) -> bool:
        return self.lo < t and (t < self.hi or (self.hi_closed and t == self.hi))

    def roots(self) -> list[float]:
        """Interval endpoints that come from roots of the quadratic."""
        if self.empty:
            return []
        ends = [self.lo] if self.lo > 0 else []
        if not self.hi_closed:
            ends.append(self.hi)
        return ends


EMPTY = Interval(math.inf, -math.inf, False)


class ScreenMask:
    """Per-predictor, per-step discard flags with their provenance."""

    def __init__(self, p: int, K: int):
        self.discard = np.zeros((p, K), dtype=bool)
        self.source = np.zeros((p, K), dtype=np.int8)

    @property
    def shape(self):
        return self.discard.shape

    def step(self, k: int) -> np.ndarray:
        return self.discard[:, k]

    def mark(self, predictors, k: int, source: Source) -> None:
        """Discard ``predictors`` at step ``k``; existing entries are kept."""
        predictors = np.asarray(predictors, dtype=np.int64)
        new = predictors[~self.discard[predictors, k]]
        self.discard[new, k] = True
        self.source[new, k] = source

    def count(self, k: int, source: Source | None = None) -> int:
        if source is None:
            return int(self.discard[:, k].sum())
        return int(np.sum(self.source[:, k] == source))


def gap_safe_test(j: int, theta, gap_at_target: float, lam_target: float, data: Dataset) -> bool:
    """True when predictor ``j`` is certified inactive at ``lam_target``."""
    corr = abs(float(data.X[:, j] @ theta))
    radius = math.sqrt(2.0 * max(gap_at_target, 0.0)) / lam_target
    return corr + data.col_norms[j] * radius < 1.0


def lookahead_coeffs(j: int, beta, theta, residual, data: Dataset) -> QuadCoeffs:
    """Quadratic whose positivity region is where the Gap Safe test holds.

    With s = |x_j^T theta| and w = ||x_j||^2:

        a = (1 - s)^2 - theta^T theta * w
        b = 2 * (theta^T y - ||beta||_1) * w
        c = -||y - X beta||^2 * w
    """
    slack = 1.0 - abs(float(data.X[:, j] @ theta))
    a, b, c = _kernels.quad_coeffs(
        slack,
        float(data.col_norms_sq[j]),
        float(theta @ theta),
        float(theta @ data.y),
        float(np.abs(beta).sum()),
        float(residual @ residual),
    )
    return QuadCoeffs(a, b, c, slack)


def lookahead_interval(q: QuadCoeffs, lam_current: float) -> Interval:
    """Penalties in ``(0, lam_current]`` at which the predictor is discarded."""
    lo, hi, closed = _kernels.lookahead_bounds(q.a, q.b, q.c, q.slack, float(lam_current))
    if not lo < hi:
        return EMPTY
    return Interval(lo, hi, bool(closed))


def lookahead_screen(
    state: SolverState, spec: PathSpec, mask: ScreenMask, data: Dataset, step: int
) -> int:
    """Extend ``mask`` with look-ahead discards computed from ``state``.

    ``state`` must be converged at ``spec.lambdas[step]`` and carry the
    full correlation vector ``X^T r`` and its dual scaling. Only predictors
    with a zero coefficient are considered, and only steps after ``step``
    are marked. Returns the number of new discards.
    """
    r = state.residual
    scale = state.scale
    return int(
        _kernels.lookahead_fill(
            mask.discard,
            mask.source,
            np.int8(Source.LOOK_AHEAD),
            spec.lambdas,
            step,
            state.correlation,
            scale,
            data.col_norms_sq,
            state.beta,
            float(r @ r) / scale**2,
            float(r @ data.y) / scale,
            float(np.abs(state.beta).sum()),
            float(r @ r),
        )
    )


def active_warm_start_set(prev: SolverState) -> np.ndarray:
    return np.flatnonzero(prev.beta)
