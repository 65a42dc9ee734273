"""Slow reference implementations used to validate the fast code paths.

Nothing here is meant for production use: every function trades speed for
obviousness (explicit loops, direct linear solves) so the vectorized and
recursive implementations can be checked against an independent source of
truth in the test suite.
"""

from __future__ import annotations

import numpy as np


def oracle_net_flow(scores: np.ndarray, signs: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Net outranking flows by explicit enumeration of every comparison.

    Parameters
    ----------
    scores : ndarray, shape (n, m, w)
        Feature values per alternative, criterion and feature.
    signs : ndarray, shape (m, w)
        +1 where larger is better, -1 where smaller is better.
    weights : ndarray, shape (m, w)
        Non-negative cell weights summing to 1.

    Returns
    -------
    ndarray, shape (n,)
        Net flow per alternative, each in [-1, 1].
    """
    scores = np.asarray(scores, dtype=float)
    signs = np.asarray(signs, dtype=float)
    weights = np.asarray(weights, dtype=float)
    n, m, w = scores.shape
    pi = np.zeros((n, n))
    for i in range(n):
        for k in range(n):
            if i == k:
                continue
            total = 0.0
            for j in range(m):
                for l in range(w):
                    a, b = scores[i, j, l], scores[k, j, l]
                    if a == b:
                        degree = 0.5
                    else:
                        diff = (a - b) * signs[j, l]
                        degree = 1.0 if diff > 0 else (0.5 if diff == 0 else 0.0)
                    total += weights[j, l] * degree
            pi[i, k] = total
    flows = np.zeros(n)
    for i in range(n):
        flows[i] = (pi[i, :].sum() - pi[:, i].sum()) / (n - 1)
    return flows


def oracle_weighted_ls(
    design: np.ndarray, targets: np.ndarray, forgetting: float, init_delta: float
) -> np.ndarray:
    """Exponentially weighted least squares solved directly.

    After processing rows 1..tau of (design, targets), the recursive filter
    with inverse-correlation initialization P0 = I / init_delta solves

        (rho^tau * init_delta * I + sum_s rho^(tau-s) x_s x_s^T) w
            = sum_s rho^(tau-s) x_s d_s

    This function forms and solves that system explicitly, which gives an
    independent target for the recursion's final coefficients.
    """
    X = np.asarray(design, dtype=float)
    d = np.asarray(targets, dtype=float)
    tau, order = X.shape
    A = (forgetting**tau) * init_delta * np.eye(order)
    b = np.zeros(order)
    for s in range(1, tau + 1):
        x = X[s - 1]
        decay = forgetting ** (tau - s)
        A += decay * np.outer(x, x)
        b += decay * x * d[s - 1]
    return np.linalg.solve(A, b)


def oracle_ols_slope(values: np.ndarray) -> float:
    """Least-squares slope against sample index 1..L via a direct solve."""
    y = np.asarray(values, dtype=float)
    t = np.arange(1, y.size + 1, dtype=float)
    A = np.vstack([t, np.ones_like(t)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    return float(coef[0])


def oracle_kendall_tau(first: tuple, second: tuple) -> float:
    """Kendall rank correlation over all item pairs, counted one by one."""
    items = sorted(first)
    pos1 = {a: first.index(a) for a in items}
    pos2 = {a: second.index(a) for a in items}
    concordant = discordant = 0
    for x in range(len(items)):
        for y in range(x + 1, len(items)):
            a, b = items[x], items[y]
            if (pos1[a] - pos1[b]) * (pos2[a] - pos2[b]) > 0:
                concordant += 1
            else:
                discordant += 1
    pairs = len(items) * (len(items) - 1) // 2
    return (concordant - discordant) / pairs if pairs else 1.0
