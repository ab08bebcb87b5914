"""Pathwise lasso with Gap Safe and look-ahead screening."""

from .data import (
    DataError,
    Dataset,
    PathSpec,
    StandardizeInfo,
    lambda_grid,
    lambda_max,
    path_spec,
    standardize,
)
from .path import PathResult, StopReason, Strategy, deviance_ratio, fit_path
from .screening import (
    Interval,
    QuadCoeffs,
    ScreenMask,
    Source,
    active_warm_start_set,
    gap_safe_test,
    lookahead_coeffs,
    lookahead_interval,
    lookahead_screen,
)
from .simulate import SimSpec, generate, true_beta
from .solver import (
    NonConvergenceError,
    SolverState,
    Tolerances,
    cd_pass,
    dual_point,
    duality_gap,
    infeasibility,
    soft_threshold,
    solve,
)

__version__ = "0.1.0"
