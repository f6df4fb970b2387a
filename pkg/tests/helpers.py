"""Shared oracles for the test suite: independent of the code paths they check."""

import numpy as np


def well_conditioned_psd(rng, n, ridge=0.0):
    """Random PSD matrix with a healthy spectrum (rectangular Wishart)."""
    B = rng.standard_normal((n, 2 * n))
    return B @ B.T / (2 * n) + ridge * np.eye(n)


def central_differences(func, X, free, step=1e-6):
    """Gradient of a scalar function of a matrix via central differences.

    Only entries where ``free`` is True are perturbed; others stay zero.
    """
    grad = np.zeros_like(X, dtype=float)
    for i in range(X.shape[0]):
        for j in range(X.shape[1]):
            if not free[i, j]:
                continue
            plus = X.copy()
            plus[i, j] += step
            minus = X.copy()
            minus[i, j] -= step
            grad[i, j] = (func(plus) - func(minus)) / (2.0 * step)
    return grad


def relative_error(actual, expected):
    expected = np.asarray(expected, dtype=float)
    denom = max(float(np.linalg.norm(expected)), 1e-12)
    return float(np.linalg.norm(np.asarray(actual, dtype=float) - expected)) / denom


def reference_adam(grads, step, beta1=0.9, beta2=0.999, eps=1e-8):
    """Scalar-recurrence Adam oracle: cumulative deltas for a gradient sequence."""
    m = np.zeros_like(grads[0], dtype=float)
    v = np.zeros_like(grads[0], dtype=float)
    deltas = []
    for t, g in enumerate(grads, start=1):
        m = beta1 * m + (1 - beta1) * g
        v = beta2 * v + (1 - beta2) * g**2
        m_hat = m / (1 - beta1**t)
        v_hat = v / (1 - beta2**t)
        deltas.append(-step * m_hat / (np.sqrt(v_hat) + eps))
    return deltas


def rank_limited_matrix(rng, m, n, rank):
    """Ground-truth low-rank matrix for recovery tests."""
    return rng.standard_normal((m, rank)) @ rng.standard_normal((n, rank)).T
