import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lookahead_lasso import (
    Dataset,
    NonConvergenceError,
    SolverState,
    Tolerances,
    cd_pass,
    dual_point,
    duality_gap,
    infeasibility,
    soft_threshold,
    solve,
    standardize,
)
from lookahead_lasso.solver import null_state

from helpers import sim_data
from oracles import dual, prox_grad, primal, random_problem

finite = st.floats(-1e6, 1e6, allow_nan=False)


@pytest.mark.parametrize("z, gamma, expected", [(3, 1, 2), (-0.5, 1, 0), (-3, 1, -2), (1, 1, 0)])
def test_soft_threshold_examples(z, gamma, expected):
    assert soft_threshold(z, gamma) == expected


@given(finite)
def test_soft_threshold_zero_gamma_is_identity(z):
    assert soft_threshold(z, 0.0) == z


@given(finite, st.floats(0, 1e6))
def test_soft_threshold_shrinks(z, gamma):
    out = soft_threshold(z, gamma)
    assert abs(out) <= abs(z)
    assert out == 0 or np.sign(out) == np.sign(z)


def test_soft_threshold_negative_gamma():
    with pytest.raises(ValueError):
        soft_threshold(1.0, -1.0)


@pytest.fixture
def one_predictor():
    return Dataset(np.array([[1.0], [-1.0]]), np.array([1.0, -1.0]))


def test_cd_pass_one_variable(one_predictor):
    state = cd_pass(SolverState.null(one_predictor), one_predictor, 1.0)
    assert state.beta[0] == 0.5
    np.testing.assert_allclose(state.residual, [0.5, -0.5])
    assert state.passes == 1


def test_cd_pass_above_lambda_max_stays_zero(small_data):
    state = SolverState.null(small_data)
    for _ in range(5):
        cd_pass(state, small_data, small_data.lam_max * 1.0001)
    assert not state.beta.any()


def test_cd_converges_to_prox_grad(rng):
    X, y = random_problem(rng, 10, 5)
    data = Dataset(X, y)
    lam = 0.3 * data.lam_max
    state = SolverState.null(data)
    for _ in range(500):
        cd_pass(state, data, lam)
    np.testing.assert_allclose(state.beta, prox_grad(X, y, lam), atol=1e-6, rtol=0)


def test_dual_point_examples(small_data):
    theta = dual_point(small_data.y, small_data, small_data.lam_max)
    np.testing.assert_allclose(theta, small_data.y / small_data.lam_max)
    assert not dual_point(np.zeros(small_data.n), small_data, 1.0).any()


def test_dual_point_feasible(rng, small_data):
    for _ in range(20):
        beta = rng.standard_normal(small_data.p) * (rng.random(small_data.p) < 0.2)
        r = small_data.y - small_data.X @ beta
        lam = rng.uniform(0.01, 1) * small_data.lam_max
        theta = dual_point(r, small_data, lam)
        for j in range(small_data.p):
            assert abs(small_data.X[:, j] @ theta) <= 1 + 1e-12


def test_duality_gap_null_pair(small_data):
    gap = duality_gap(np.zeros(small_data.p), np.zeros(small_data.n), small_data, 0.7)
    assert gap == pytest.approx(0.5 * small_data.y @ small_data.y)


def test_duality_gap_matches_primal_minus_dual(rng, small_data):
    X, y = small_data.X, small_data.y
    for _ in range(20):
        beta = rng.standard_normal(small_data.p)
        theta = rng.standard_normal(small_data.n)
        lam = rng.uniform(0.01, 2)
        expected = primal(X, y, beta, lam) - dual(y, theta, lam)
        assert duality_gap(beta, theta, small_data, lam) == pytest.approx(expected, rel=1e-10)


def test_duality_gap_vanishes_at_optimum(small_data):
    lam = 0.4 * small_data.lam_max
    state = solve(small_data, lam, tol=Tolerances(gap_frac=1e-13))
    theta = dual_point(state.residual, small_data, lam)
    assert duality_gap(state.beta, theta, small_data, lam) <= 1e-12 * small_data.null_primal


def test_infeasibility_examples(small_data):
    lmax = small_data.lam_max
    assert infeasibility(small_data.y, small_data, lmax) == 0.0
    assert infeasibility(small_data.y, small_data, lmax / 2) == pytest.approx(lmax / 2)


def test_solve_at_lambda_max(small_data):
    state = solve(small_data, small_data.lam_max)
    assert not state.beta.any()
    assert state.gap / small_data.null_primal <= 1e-15
    assert state.passes == 10


def test_solve_one_predictor(one_predictor):
    state = solve(one_predictor, 1.0)
    assert state.beta[0] == 0.5
    assert state.passes == Tolerances().screen_every


def test_solve_matches_ista():
    data = sim_data(20, 50, snr=1.0, seed=11)
    lam = data.lam_max / 2
    state = solve(data, lam)
    np.testing.assert_allclose(state.beta, prox_grad(data.X, data.y, lam), atol=1e-6, rtol=0)
    assert state.gap <= 1e-6 * 0.5 * data.y @ data.y
    assert state.infeas <= 1e-5 * data.lam_max


def test_solve_certificates_are_full_problem(small_data):
    lam = 0.3 * small_data.lam_max
    state = solve(small_data, lam, dynamic_screen=True)
    theta = dual_point(state.residual, small_data, lam)
    np.testing.assert_allclose(state.theta, theta, rtol=1e-12)
    assert state.gap == pytest.approx(duality_gap(state.beta, theta, small_data, lam), rel=1e-9)
    assert state.infeas == pytest.approx(infeasibility(state.residual, small_data, lam))


def test_solve_checkpoint_invariants(rng, small_data):
    X, y = small_data.X, small_data.y
    lam = 0.2 * small_data.lam_max
    ref = prox_grad(X, y, lam)
    state = SolverState.null(small_data)
    for cap in (10, 20, 30, 40):
        try:
            state = solve(small_data, lam, warm=state, tol=Tolerances(max_passes=cap))
        except NonConvergenceError as exc:
            state = exc.state
        drift = np.linalg.norm(state.residual - (y - X @ state.beta))
        assert drift <= 1e-8 * np.linalg.norm(y)
        theta = dual_point(state.residual, small_data, lam)
        assert np.max(np.abs(X.T @ theta)) <= 1 + 1e-12
        gap = duality_gap(state.beta, theta, small_data, lam)
        assert gap >= -1e-10
        d = dual(y, theta, lam)
        assert d <= primal(X, y, ref, lam) + 1e-10 <= primal(X, y, state.beta, lam) + 2e-10
        state.passes = 0


def test_solve_nonconvergence(small_data):
    with pytest.raises(NonConvergenceError) as info:
        solve(small_data, 0.05 * small_data.lam_max, tol=Tolerances(max_passes=3))
    assert info.value.state is not None
    assert info.value.state.passes == 3


def test_solve_rejects_nonpositive_lambda(small_data):
    with pytest.raises(ValueError):
        solve(small_data, 0.0)


def test_masked_predictors_stay_zero(small_data):
    lam = 0.5 * small_data.lam_max
    tight = Tolerances(gap_frac=1e-12)
    at_lam = solve(small_data, lam, tol=tight)
    warm = solve(small_data, 0.05 * small_data.lam_max, tol=tight)
    # inactive at lam but active in the warm start
    mask = (at_lam.beta == 0) & (warm.beta != 0)
    assert mask.any()
    state = solve(small_data, lam, warm=warm, mask=mask)
    assert not state.beta[mask].any()
    assert warm.beta[mask].all()
    np.testing.assert_allclose(state.beta, at_lam.beta, atol=1e-5)


def test_dynamic_screening_is_safe():
    rng = np.random.default_rng(7)
    n_screened = 0
    for inst in range(100):
        n, p = rng.integers(10, 40), rng.integers(20, 80)
        X, y = random_problem(rng, n, p)
        data = Dataset(X, y)
        lam = rng.uniform(0.05, 0.9) * data.lam_max
        state = solve(data, lam, dynamic_screen=True)
        ref = solve(data, lam, tol=Tolerances(gap_frac=1e-10))
        screened = np.flatnonzero(state.screened)
        n_screened += len(screened)
        assert not ref.beta[screened].any(), f"instance {inst}"
    assert n_screened > 0


def test_warm_start_from_other_problem_refreshes_residual(small_data, rng):
    warm = SolverState.null(small_data)
    warm.beta = rng.standard_normal(small_data.p)  # residual deliberately stale
    a = solve(small_data, 0.3 * small_data.lam_max, warm=warm, tol=Tolerances(gap_frac=1e-12))
    b = solve(small_data, 0.3 * small_data.lam_max, tol=Tolerances(gap_frac=1e-12))
    np.testing.assert_allclose(a.beta, b.beta, atol=1e-7)


def test_null_state_certificate(small_data):
    state = null_state(small_data)
    assert state.gap == 0.0
    assert state.infeas == 0.0
    np.testing.assert_allclose(state.theta, small_data.y / small_data.lam_max)
