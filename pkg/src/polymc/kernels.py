"""Kernel specifications, Gram evaluation, and the matching gradient adjoints.

Columns of the data matrix are the points: ``gram(X, spec)[i, j]`` is the
kernel between columns ``i`` and ``j`` of ``X``. The explicit polynomial
feature map is provided as a test oracle for the kernel identity
φ(x)ᵀφ(y) = (xᵀy + offset)^q.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy.spatial.distance import pdist, squareform

FAMILIES = ("polynomial", "rbf")

# explicit feature maps are for oracle use only; keep them small
FEATURE_MAP_MAX_LEN = 100_000


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family plus hyperparameters, defining the implicit feature map.

    family
        ``"polynomial"`` for (xᵀy + offset)^poly_order, ``"rbf"`` for
        exp(−‖x−y‖² / (2·bandwidth²)).
    bandwidth
        Positive float, or None to resolve from data: the mean squared
        pairwise column distance times ``auto_scale`` becomes bandwidth².
    """

    family: str = "rbf"
    poly_order: int = 2
    offset: float = 1.0
    bandwidth: float | None = None
    auto_scale: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}; expected one of {FAMILIES}")
        if self.family == "polynomial":
            if int(self.poly_order) != self.poly_order or self.poly_order < 1:
                raise ValueError(f"poly_order must be a positive integer, got {self.poly_order}")
            if self.offset < 0:
                raise ValueError(f"offset must be non-negative, got {self.offset}")
        if self.bandwidth is not None and not self.bandwidth > 0:
            raise ValueError(f"bandwidth must be positive, got {self.bandwidth}")
        if not self.auto_scale > 0:
            raise ValueError(f"auto_scale must be positive, got {self.auto_scale}")

    @property
    def is_resolved(self) -> bool:
        return self.family != "rbf" or self.bandwidth is not None

    def resolve(self, X: np.ndarray) -> "KernelSpec":
        """Fix the RBF bandwidth from data; no-op when already resolved."""
        if self.is_resolved:
            return self
        return replace(self, bandwidth=resolve_bandwidth(X, self.auto_scale))


def resolve_bandwidth(X: np.ndarray, scale: float = 1.0) -> float:
    """Bandwidth from the mean squared pairwise distance between columns.

    Returns sqrt(scale · mean‖x_i − x_j‖²) over all column pairs i < j.
    Falls back to 1.0 (with a warning) when all columns coincide.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] < 2:
        raise ValueError("bandwidth resolution needs a 2-D matrix with at least two columns")
    msd = float(np.mean(pdist(X.T, "sqeuclidean")))
    if msd <= 0.0:
        warnings.warn("all columns identical; falling back to bandwidth 1.0", RuntimeWarning)
        return 1.0
    return math.sqrt(scale * msd)


def _check_points(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError(f"expected a 2-D matrix of column points, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("matrix contains non-finite entries")
    return X


def gram(X: np.ndarray, spec: KernelSpec) -> np.ndarray:
    """Kernel Gram matrix of the columns of ``X``; symmetric (n, n)."""
    X = _check_points(X)
    if not spec.is_resolved:
        raise ValueError("RBF bandwidth is unresolved; call spec.resolve(X) first")
    if spec.family == "polynomial":
        M = X.T @ X
        M = (M + M.T) / 2.0
        return (M + spec.offset) ** spec.poly_order
    sq = squareform(pdist(X.T, "sqeuclidean"))
    return np.exp(-sq / (2.0 * spec.bandwidth**2))


def gram_grad_adjoint(X: np.ndarray, spec: KernelSpec, G: np.ndarray) -> np.ndarray:
    """Gradient of Σ_ij G_ij·k(x_i, x_j) with respect to ``X``, for symmetric G.

    Closed forms (checked against central finite differences in the tests):
    polynomial 2·X·(G ⊙ a(XᵀX + b)^(a−1)); RBF (2/σ²)·(X·(G⊙K) − X·diag(rowsum(G⊙K))).
    """
    X = _check_points(X)
    G = np.asarray(G, dtype=float)
    n = X.shape[1]
    if G.shape != (n, n):
        raise ValueError(f"G must be ({n}, {n}), got {G.shape}")
    if spec.family == "polynomial":
        M = X.T @ X
        M = (M + M.T) / 2.0
        B = G * (spec.poly_order * (M + spec.offset) ** (spec.poly_order - 1))
        return 2.0 * X @ B
    GK = G * gram(X, spec)
    row = GK.sum(axis=1)
    return (2.0 / spec.bandwidth**2) * (X @ GK - X * row[np.newaxis, :])


def _monomial_exponents(m: int, q: int):
    """All exponent vectors in m variables with total degree ≤ q, graded order."""
    for total in range(q + 1):
        for combo in itertools.combinations_with_replacement(range(m), total):
            mu = np.zeros(m, dtype=np.int64)
            for i in combo:
                mu[i] += 1
            yield mu


def explicit_feature_matrix(X: np.ndarray, q: int, offset: float = 1.0) -> np.ndarray:
    """Explicit order-q polynomial features of every column of ``X``.

    Rows are monomials x^μ with |μ| ≤ q, weighted by square-rooted
    multinomial coefficients so that columnwise inner products reproduce the
    polynomial kernel exactly: φ(x)ᵀφ(y) = (xᵀy + offset)^q.
    """
    X = _check_points(X)
    if q < 0 or int(q) != q:
        raise ValueError(f"q must be a non-negative integer, got {q}")
    if offset < 0:
        raise ValueError(f"offset must be non-negative, got {offset}")
    m, n = X.shape
    length = math.comb(m + q, q)
    if length > FEATURE_MAP_MAX_LEN:
        raise ValueError(
            f"feature map length C({m + q}, {q}) = {length} exceeds the oracle cap {FEATURE_MAP_MAX_LEN}"
        )
    out = np.empty((length, n))
    q_fact = math.factorial(q)
    for row, mu in enumerate(_monomial_exponents(m, q)):
        total = int(mu.sum())
        multinomial = q_fact // (math.prod(math.factorial(int(e)) for e in mu) * math.factorial(q - total))
        coeff = multinomial * offset ** (q - total)
        out[row] = math.sqrt(coeff) * np.prod(X ** mu[:, np.newaxis], axis=0)
    return out


def explicit_feature_map(x: np.ndarray, q: int, offset: float = 1.0) -> np.ndarray:
    """Explicit polynomial features of a single vector; see explicit_feature_matrix."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError(f"expected a vector, got shape {x.shape}")
    return explicit_feature_matrix(x[:, np.newaxis], q, offset)[:, 0]
