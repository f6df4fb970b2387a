"""CSV input/output for masked and completed matrices.

Cells are decimal numbers; a missing cell is the missing token (empty by
default) or any spelling of "nan". Numbers are written with Python's
shortest round-trip representation, so observed values survive a
write/read cycle bit-exactly.
"""

from __future__ import annotations

import csv

import numpy as np

from .exceptions import DataError
from .masked import MaskedMatrix


def read_masked_csv(path, missing_token: str = "") -> MaskedMatrix:
    """Read a rectangular CSV into a MaskedMatrix.

    Raises DataError with 1-based (row, column) coordinates for ragged rows
    or unparsable cells, and for files with no observed values.
    """
    try:
        with open(path, newline="") as fh:
            rows = [row for row in csv.reader(fh)]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    rows = [row for row in rows if row != []]
    if not rows:
        raise DataError(f"{path}: file contains no data")
    width = len(rows[0])
    values = np.zeros((len(rows), width))
    mask = np.zeros((len(rows), width), dtype=bool)
    for i, row in enumerate(rows):
        if len(row) != width:
            raise DataError(f"{path}: row {i + 1} has {len(row)} cells, expected {width}")
        for j, cell in enumerate(row):
            text = cell.strip()
            if text == missing_token or text.lower() == "nan":
                values[i, j] = np.nan
                continue
            try:
                parsed = float(text)
            except ValueError:
                raise DataError(f"{path}: cell ({i + 1},{j + 1}): cannot parse {text!r}") from None
            if not np.isfinite(parsed):
                raise DataError(f"{path}: cell ({i + 1},{j + 1}): non-finite value {text!r}")
            values[i, j] = parsed
            mask[i, j] = True
    if not mask.any():
        raise DataError(f"{path}: every cell is missing")
    return MaskedMatrix(values, mask)


def write_masked_csv(matrix: MaskedMatrix, path, missing_token: str = "") -> None:
    """Write a MaskedMatrix as CSV; unobserved cells become the missing token."""
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            for i in range(matrix.shape[0]):
                writer.writerow(
                    [
                        repr(float(matrix.values[i, j])) if matrix.mask[i, j] else missing_token
                        for j in range(matrix.shape[1])
                    ]
                )
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from exc


def write_completed_csv(values: np.ndarray, path) -> None:
    """Write a fully observed matrix as CSV; refuses non-finite cells."""
    values = np.asarray(values, dtype=float)
    if values.ndim != 2:
        raise DataError(f"completed matrix must be 2-D, got shape {values.shape}")
    if not np.all(np.isfinite(values)):
        raise DataError("completed matrix contains non-finite cells")
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            for row in values:
                writer.writerow([repr(float(v)) for v in row])
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from exc
