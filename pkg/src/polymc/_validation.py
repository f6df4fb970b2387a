"""Small input-validation helpers shared by the estimator wrappers."""

from __future__ import annotations

import numpy as np


def as_float_matrix(X, name: str = "X", allow_nan: bool = False) -> np.ndarray:
    """Coerce to a 2-D float array; NaN marks missing values when allowed."""
    arr = np.asarray(X, dtype=float)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if allow_nan:
        if np.isinf(arr).any():
            raise ValueError(f"{name} contains infinite entries")
    elif not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def as_label_vector(y, n_samples: int, name: str = "y") -> np.ndarray:
    y = np.asarray(y)
    if y.ndim != 1 or y.shape[0] != n_samples:
        raise ValueError(f"{name} must be a vector with {n_samples} entries, got shape {y.shape}")
    return y
