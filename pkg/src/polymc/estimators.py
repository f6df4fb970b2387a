"""Scikit-learn style wrappers around the completion solvers.

These follow the sklearn imputer convention: rows are samples, columns are
features, and NaN marks a missing value. Internally the solvers operate on
the transpose (data points as matrix columns). Completion is transductive,
so ``fit(X)`` solves the completion of X itself and ``transform`` hands the
completed matrix back for that same X; use ``fit_transform`` as the main
entry point.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin, clone
from sklearn.exceptions import NotFittedError

from ._validation import as_float_matrix, as_label_vector
from .kernels import KernelSpec
from .masked import MaskedMatrix
from .nuclear import NuclearNormConfig, nuclear_complete
from .objectives import RelaxationSpec
from .solver import SolverConfig, kernel_complete
from .transductive import build_transductive, decode_labels


def _matching_pattern(X, fitted_values, fitted_mask) -> bool:
    if X.shape != fitted_values.shape:
        return False
    mask = ~np.isnan(X)
    return bool(np.array_equal(mask, fitted_mask) and np.array_equal(X[mask], fitted_values[mask]))


class _TransductiveCompleter(BaseEstimator, TransformerMixin):
    """Shared fit/transform plumbing; subclasses provide _solve."""

    def fit(self, X, y=None):
        X = as_float_matrix(X, allow_nan=True)
        mask = ~np.isnan(X)
        if not mask.any():
            raise ValueError("X has no observed entries")
        if mask.all() and getattr(self, "mode", "hard") == "hard":
            # nothing to impute; keep sklearn ergonomics instead of erroring
            self.X_completed_ = X.copy()
            self.result_ = None
        else:
            masked = MaskedMatrix(X.T, mask.T)
            self.result_ = self._solve(masked)
            self.X_completed_ = self.result_.X_hat.T
        self._fitted_values = X.copy()
        self._fitted_mask = mask
        return self

    def transform(self, X):
        if not hasattr(self, "X_completed_"):
            raise NotFittedError(f"{type(self).__name__} is not fitted yet")
        X = as_float_matrix(X, allow_nan=True)
        if not _matching_pattern(X, self._fitted_values, self._fitted_mask):
            raise ValueError(
                "completion is transductive: transform only returns the matrix "
                "passed to fit; call fit_transform on new data"
            )
        return self.X_completed_.copy()


class KernelMatrixCompletion(_TransductiveCompleter):
    """Impute missing values by minimizing a rank surrogate of the kernel
    Gram matrix of the samples.

    Suited to data whose samples lie on one or several low-dimensional
    nonlinear (polynomial) manifolds, where plain low-rank completion fails.

    Parameters
    ----------
    kernel : {"rbf", "polynomial"}
        Kernel family inducing the implicit feature map.
    poly_order, offset : polynomial kernel parameters (xᵀy + offset)^poly_order.
    bandwidth : float or None
        RBF bandwidth; None resolves it from the mean squared pairwise
        sample distance scaled by ``bandwidth_scale``.
    relaxation : {"r1", "r2", "r3"}
        Rank surrogate: full, truncated, or weighted Schatten-p sum.
    p : singular-value exponent in (0, 1] for genuine rank surrogates.
    s : truncation index for r2; None uses the feature count.
    weights : {"linear", "inv-sigma"} or array-like
        Weight rule (or explicit nondecreasing weights) for r3.
    mode : {"hard", "soft"}
        Hard keeps observed values fixed; soft penalizes deviations with
        weight ``penalty`` and lets every entry move.
    max_iter, tol, step, step_down, step_up, beta1, beta2, adam_eps, floor
        Optimizer controls; see SolverConfig.
    """

    def __init__(
        self,
        kernel="rbf",
        poly_order=2,
        offset=1.0,
        bandwidth=None,
        bandwidth_scale=1.0,
        relaxation="r3",
        p=0.5,
        s=None,
        weights="linear",
        weight_eps=1e-6,
        mode="hard",
        penalty=1.0,
        step=1e-4,
        beta1=0.9,
        beta2=0.999,
        adam_eps=1e-8,
        floor=1e-6,
        tol=1e-6,
        max_iter=1000,
        step_down=0.8,
        step_up=1.1,
        init="zero",
        random_state=0,
    ):
        self.kernel = kernel
        self.poly_order = poly_order
        self.offset = offset
        self.bandwidth = bandwidth
        self.bandwidth_scale = bandwidth_scale
        self.relaxation = relaxation
        self.p = p
        self.s = s
        self.weights = weights
        self.weight_eps = weight_eps
        self.mode = mode
        self.penalty = penalty
        self.step = step
        self.beta1 = beta1
        self.beta2 = beta2
        self.adam_eps = adam_eps
        self.floor = floor
        self.tol = tol
        self.max_iter = max_iter
        self.step_down = step_down
        self.step_up = step_up
        self.init = init
        self.random_state = random_state

    def _config(self) -> SolverConfig:
        if isinstance(self.weights, str):
            rule = {"linear": "linear", "inv-sigma": "inv_sigma", "inv_sigma": "inv_sigma"}.get(self.weights)
            if rule is None:
                raise ValueError(f"unknown weight rule {self.weights!r}")
            relaxation = RelaxationSpec(
                kind=self.relaxation, p=self.p, s=self.s, weight_rule=rule, weight_eps=self.weight_eps
            )
        else:
            relaxation = RelaxationSpec(
                kind=self.relaxation, p=self.p, s=self.s,
                weights=np.asarray(self.weights, dtype=float), weight_rule="given",
            )
        kernel = KernelSpec(
            family="polynomial" if self.kernel in ("poly", "polynomial") else self.kernel,
            poly_order=self.poly_order,
            offset=self.offset,
            bandwidth=self.bandwidth,
            auto_scale=self.bandwidth_scale,
        )
        return SolverConfig(
            relaxation=relaxation,
            kernel=kernel,
            mode=self.mode,
            penalty=self.penalty,
            step=self.step,
            beta1=self.beta1,
            beta2=self.beta2,
            adam_eps=self.adam_eps,
            floor=self.floor,
            tol=self.tol,
            t_max=self.max_iter,
            step_down=self.step_down,
            step_up=self.step_up,
            seed=0 if self.random_state is None else int(self.random_state),
            init=self.init,
        )

    def _solve(self, masked):
        return kernel_complete(masked, self._config())


class NuclearNormCompletion(_TransductiveCompleter):
    """Impute missing values by nuclear-norm minimization (the low-rank baseline).

    Parameters mirror NuclearNormConfig: ``shrinkage`` ("auto" or a positive
    initial value, halved on plateaus), ``max_iter``, ``tol`` and the
    proximal ``step`` in (0, 1].
    """

    mode = "hard"  # observed entries always restored exactly

    def __init__(self, shrinkage="auto", max_iter=500, tol=1e-6, step=1.0):
        self.shrinkage = shrinkage
        self.max_iter = max_iter
        self.tol = tol
        self.step = step

    def _solve(self, masked):
        config = NuclearNormConfig(
            shrinkage=self.shrinkage, max_iters=self.max_iter, tol=self.tol, step=self.step
        )
        return nuclear_complete(masked, config)


class CompletionClassifier(BaseEstimator, ClassifierMixin):
    """Transductive classifier: stack features over one-hot labels and treat
    test labels as missing entries of one big matrix.

    ``completer`` is any fitted-per-call completion transformer (default:
    ``KernelMatrixCompletion()``); features may contain NaN for missing
    values in both the training and the test block.
    """

    def __init__(self, completer=None):
        self.completer = completer

    def fit(self, X, y):
        X = as_float_matrix(X, allow_nan=True)
        y = as_label_vector(y, X.shape[0])
        self.classes_, self._y_indices = np.unique(y, return_inverse=True)
        self._X_train = X
        return self

    def predict(self, X):
        if not hasattr(self, "classes_"):
            raise NotFittedError("CompletionClassifier is not fitted yet")
        X = as_float_matrix(X, allow_nan=True)
        if X.shape[1] != self._X_train.shape[1]:
            raise ValueError(
                f"X has {X.shape[1]} features, expected {self._X_train.shape[1]}"
            )
        train_cols = self._X_train.T
        test_cols = X.T
        feature_mask = ~np.isnan(np.hstack([train_cols, test_cols]))
        masked, task = build_transductive(
            np.nan_to_num(train_cols),
            self._y_indices,
            np.nan_to_num(test_cols),
            feature_mask=feature_mask,
        )
        completer = clone(self.completer) if self.completer is not None else KernelMatrixCompletion()
        stacked = np.where(masked.mask, masked.values, np.nan)
        completed = completer.fit_transform(stacked.T).T
        predictions, _ = decode_labels(completed, task)
        self.label_scores_ = completed[task.feature_dim :, task.n_train :]
        return self.classes_[predictions]
