"""Compiled inner loops.

All matrices are float64 and Fortran-ordered so ``X[:, j]`` is contiguous.
"""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def soft_threshold(z, gamma):
    if z > gamma:
        return z - gamma
    if z < -gamma:
        return z + gamma
    return 0.0


@njit(cache=True)
def cd_sweeps(X, beta, resid, working, norms_sq, lam, n_passes):
    """Run ``n_passes`` cyclic sweeps over ``working``, updating in place."""
    n = X.shape[0]
    for _ in range(n_passes):
        for j in working:
            old = beta[j]
            z = norms_sq[j] * old
            for i in range(n):
                z += X[i, j] * resid[i]
            new = soft_threshold(z, lam) / norms_sq[j]
            if new != old:
                diff = old - new
                for i in range(n):
                    resid[i] += diff * X[i, j]
                beta[j] = new


@njit(cache=True)
def correlations(X, r, idx, out):
    """out[j] = X[:, j] @ r for j in idx; returns max |out[j]| (0 if empty)."""
    n = X.shape[0]
    top = 0.0
    for j in idx:
        s = 0.0
        for i in range(n):
            s += X[i, j] * r[i]
        out[j] = s
        if abs(s) > top:
            top = abs(s)
    return top


@njit(cache=True)
def refresh_residual(X, y, beta, out):
    n, p = X.shape
    for i in range(n):
        out[i] = y[i]
    for j in range(p):
        b = beta[j]
        if b != 0.0:
            for i in range(n):
                out[i] -= b * X[i, j]


@njit(cache=True)
def quad_coeffs(slack, norm_sq, theta_sq, theta_y, l1, r_sq):
    """Coefficients of a t^2 + b t + c > 0, the squared Gap Safe test at t.

    Inputs are the slack 1 - |x_j^T theta|, ||x_j||^2, theta^T theta,
    theta^T y, ||beta||_1 and ||y - X beta||^2.
    """
    a = slack * slack - theta_sq * norm_sq
    b = 2.0 * (theta_y - l1) * norm_sq
    c = -r_sq * norm_sq
    return a, b, c


@njit(cache=True)
def lookahead_bounds(a, b, c, slack, lam):
    """Discard interval of the look-ahead quadratic.

    Returns ``(lo, hi, hi_closed)`` describing the set of ``t`` in
    ``(0, lam]`` with ``a t^2 + b t + c > 0``. The set is ``(lo, hi]`` if
    ``hi_closed`` else ``(lo, hi)``; an empty set is ``lo >= hi``.
    """
    empty = (math.inf, -math.inf, False)
    if not slack > 0.0:
        return empty
    scale = max(abs(b), abs(c), 1.0)
    if abs(a) <= 1e-14 * scale:
        if b > 0.0:
            lo = max(-c / b, 0.0)
            if lo < lam:
                return (lo, lam, True)
        return empty

    disc = b * b - 4.0 * a * c
    if a > 0.0:
        # c <= 0 puts one root on each side of zero
        disc = max(disc, 0.0)
        q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
        if q == 0.0:
            upper = 0.0
        else:
            upper = max(q / a, c / q)
        lo = max(upper, 0.0)
        if lo < lam:
            return (lo, lam, True)
        return empty

    # a < 0: positive only strictly between two nonnegative roots
    if not disc > 0.0 or not b > 0.0:
        return empty
    q = -0.5 * (b + math.sqrt(disc))
    r1 = q / a
    r2 = c / q
    lo = max(min(r1, r2), 0.0)
    hi = max(r1, r2)
    if lo >= lam or hi <= lo:
        return empty
    if hi > lam:
        return (lo, lam, True)
    return (lo, hi, False)


@njit(cache=True)
def lookahead_fill(discard, source, tag, lambdas, step, corr, scale, norms_sq,
                   beta, theta_sq, theta_y, l1, r_sq):
    """Mark future steps covered by each inactive predictor's interval.

    Returns the number of newly set (predictor, step) entries.
    """
    p = discard.shape[0]
    K = lambdas.shape[0]
    lam = lambdas[step]
    added = 0
    for j in range(p):
        if beta[j] != 0.0:
            continue
        slack = 1.0 - abs(corr[j]) / scale
        a, b, c = quad_coeffs(slack, norms_sq[j], theta_sq, theta_y, l1, r_sq)
        lo, hi, closed = lookahead_bounds(a, b, c, slack, lam)
        if lo >= hi:
            continue
        for m in range(step + 1, K):
            t = lambdas[m]
            if t <= lo:
                break
            if t < hi or (closed and t == hi):
                if not discard[j, m]:
                    discard[j, m] = True
                    source[j, m] = tag
                    added += 1
    return added
