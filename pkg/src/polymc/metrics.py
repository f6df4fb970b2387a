"""Recovery error metrics, evaluated over the missing entries only."""

from __future__ import annotations

import numpy as np


def _missing_entries(truth, estimate, mask):
    truth = np.asarray(truth, dtype=float)
    estimate = np.asarray(estimate, dtype=float)
    mask = np.asarray(mask, dtype=bool)
    if truth.shape != estimate.shape or truth.shape != mask.shape:
        raise ValueError(
            f"shape mismatch: truth {truth.shape}, estimate {estimate.shape}, mask {mask.shape}"
        )
    missing = ~mask
    if not missing.any():
        raise ValueError("no missing entries to evaluate")
    return truth[missing], estimate[missing]


def rse(truth: np.ndarray, estimate: np.ndarray, mask: np.ndarray) -> float:
    """Relative squared error sqrt(Σ(X−X̂)² / ΣX²) over unobserved cells."""
    x, x_hat = _missing_entries(truth, estimate, mask)
    denom = float(x @ x)
    if denom == 0.0:
        raise ValueError("ground truth is zero on every missing entry; RSE undefined")
    diff = x - x_hat
    return float(np.sqrt(float(diff @ diff) / denom))


def rae(truth: np.ndarray, estimate: np.ndarray, mask: np.ndarray) -> float:
    """Relative absolute error Σ|X−X̂| / Σ|X| over unobserved cells."""
    x, x_hat = _missing_entries(truth, estimate, mask)
    denom = float(np.abs(x).sum())
    if denom == 0.0:
        raise ValueError("ground truth is zero on every missing entry; RAE undefined")
    return float(np.abs(x - x_hat).sum() / denom)
