"""Transductive classification as matrix completion.

Training and test features are stacked over a one-hot label block; the test
labels enter the stack as missing entries, so completing the stacked matrix
recovers them. Works even when the feature blocks themselves have holes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DataError
from .masked import MaskedMatrix


@dataclass(frozen=True)
class TransductiveTask:
    """Layout of a stacked classification problem.

    ``features`` is m×(n_train + n_test) with training columns first;
    ``labels_onehot`` is the observed n_classes×n_train block.
    """

    features: np.ndarray
    labels_onehot: np.ndarray
    n_train: int
    n_test: int
    n_classes: int

    @property
    def feature_dim(self) -> int:
        return self.features.shape[0]


def one_hot(labels: np.ndarray, n_classes: int | None = None) -> np.ndarray:
    """One-hot encode integer class labels into an n_classes×n matrix."""
    labels = np.asarray(labels)
    if labels.ndim != 1:
        raise DataError(f"labels must be 1-D, got shape {labels.shape}")
    if labels.size == 0 or np.any(labels != labels.astype(int)):
        raise DataError("labels must be non-empty integers")
    labels = labels.astype(int)
    if np.any(labels < 0):
        raise DataError("labels must be non-negative class indices")
    c = int(labels.max()) + 1 if n_classes is None else int(n_classes)
    if labels.max() >= c:
        raise DataError(f"label {labels.max()} out of range for {c} classes")
    out = np.zeros((c, labels.size))
    out[labels, np.arange(labels.size)] = 1.0
    return out


def _as_onehot(train_labels, n_train: int) -> np.ndarray:
    arr = np.asarray(train_labels, dtype=float)
    if arr.ndim == 1:
        if arr.shape[0] != n_train:
            raise DataError(f"got {arr.shape[0]} labels for {n_train} training columns")
        return one_hot(arr)
    if arr.ndim != 2:
        raise DataError(f"labels must be 1-D classes or a 2-D one-hot block, got shape {arr.shape}")
    if arr.shape[1] != n_train:
        raise DataError(f"one-hot block has {arr.shape[1]} columns, expected {n_train}")
    if not np.all(np.isin(arr, (0.0, 1.0))) or not np.allclose(arr.sum(axis=0), 1.0):
        raise DataError("one-hot block must contain 0/1 entries with each column summing to 1")
    return arr


def build_transductive(
    train_features: np.ndarray,
    train_labels,
    test_features: np.ndarray,
    feature_mask: np.ndarray | None = None,
) -> tuple[MaskedMatrix, TransductiveTask]:
    """Stack features over labels into one masked matrix.

    ``train_labels`` is either a vector of class indices or a one-hot block.
    ``feature_mask`` (True = observed) applies extra missingness to the
    combined feature block; the test-label block is always missing.
    """
    Xtr = np.asarray(train_features, dtype=float)
    Xte = np.asarray(test_features, dtype=float)
    if Xtr.ndim != 2 or Xte.ndim != 2:
        raise DataError("feature blocks must be 2-D (features x columns)")
    if Xte.shape[0] != Xtr.shape[0]:
        raise DataError(
            f"feature dimensions differ: train {Xtr.shape[0]}, test {Xte.shape[0]}"
        )
    n_train, n_test = Xtr.shape[1], Xte.shape[1]
    Y = _as_onehot(train_labels, n_train)
    c = Y.shape[0]

    features = np.hstack([Xtr, Xte])
    m = features.shape[0]
    if feature_mask is None:
        feature_mask = np.ones_like(features, dtype=bool)
    else:
        feature_mask = np.asarray(feature_mask, dtype=bool)
        if feature_mask.shape != features.shape:
            raise DataError(
                f"feature mask shape {feature_mask.shape} does not match features {features.shape}"
            )

    values = np.vstack([features, np.hstack([Y, np.zeros((c, n_test))])])
    mask = np.vstack(
        [
            feature_mask,
            np.hstack([np.ones((c, n_train), dtype=bool), np.zeros((c, n_test), dtype=bool)]),
        ]
    )
    task = TransductiveTask(
        features=features, labels_onehot=Y, n_train=n_train, n_test=n_test, n_classes=c
    )
    return MaskedMatrix(values, mask), task


def decode_labels(
    completed: np.ndarray, task: TransductiveTask, true_labels: np.ndarray | None = None
) -> tuple[np.ndarray, float | None]:
    """Read off test predictions from a completed stack.

    Each test column is assigned the class with the largest recovered label
    entry (ties go to the lowest class index). Returns the predictions and,
    when ``true_labels`` is given, the misclassification rate.
    """
    completed = np.asarray(completed, dtype=float)
    expected = (task.feature_dim + task.n_classes, task.n_train + task.n_test)
    if completed.shape != expected:
        raise DataError(f"completed stack has shape {completed.shape}, expected {expected}")
    block = completed[task.feature_dim :, task.n_train :]
    predictions = np.argmax(block, axis=0)
    if true_labels is None:
        return predictions, None
    true_labels = np.asarray(true_labels, dtype=int)
    if true_labels.shape != (task.n_test,):
        raise DataError(f"true labels must have shape ({task.n_test},), got {true_labels.shape}")
    return predictions, float(np.mean(predictions != true_labels))
