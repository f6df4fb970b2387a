"""Partially observed matrices, the universal input of every completion routine."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DataError


@dataclass(frozen=True)
class MaskedMatrix:
    """A real matrix together with a boolean observation mask.

    ``values[i, j]`` is meaningful only where ``mask[i, j]`` is True.
    Unobserved cells may hold any sentinel (conventionally NaN) and are
    never read by the solvers.
    """

    values: np.ndarray
    mask: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        mask = np.asarray(self.mask)
        if values.ndim != 2 or values.size == 0:
            raise DataError(f"values must be a non-empty 2-D array, got shape {values.shape}")
        if mask.shape != values.shape:
            raise DataError(f"mask shape {mask.shape} does not match values shape {values.shape}")
        mask = mask.astype(bool)
        if not mask.any():
            raise DataError("matrix has no observed entries")
        if not np.all(np.isfinite(values[mask])):
            raise DataError("observed entries must be finite")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "mask", mask)

    @classmethod
    def from_array(cls, array, missing=np.nan) -> "MaskedMatrix":
        """Build from a dense array whose missing cells hold ``missing`` (default NaN)."""
        arr = np.asarray(array, dtype=float)
        if isinstance(missing, float) and np.isnan(missing):
            mask = ~np.isnan(arr)
        else:
            mask = arr != missing
        return cls(arr, mask)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def n_observed(self) -> int:
        return int(self.mask.sum())

    @property
    def n_missing(self) -> int:
        return int((~self.mask).sum())

    def filled(self, fill: float = 0.0) -> np.ndarray:
        """Dense copy with every unobserved cell replaced by ``fill``."""
        return np.where(self.mask, self.values, fill)

    def column_mean_filled(self) -> np.ndarray:
        """Dense copy with unobserved cells replaced by their column's observed mean.

        Columns with no observed entries fall back to zero.
        """
        counts = self.mask.sum(axis=0)
        sums = np.where(self.mask, self.values, 0.0).sum(axis=0)
        means = np.divide(sums, counts, out=np.zeros_like(sums), where=counts > 0)
        return np.where(self.mask, self.values, means[np.newaxis, :])
