"""Symmetric eigendecomposition and spectral matrix functions.

Every objective and gradient in this package is a spectral function of a
kernel Gram matrix, so the numerics are centralized here: descending
eigenvalue order, defensive symmetrization, and an eigenvalue floor that
keeps negative matrix powers finite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class EigenDecomp:
    """Eigendecomposition of a symmetric matrix, eigenvalues sorted descending.

    Column ``i`` of ``eigenvectors`` pairs with ``eigenvalues[i]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def size(self) -> int:
        return self.eigenvalues.shape[0]


def sym_eig(matrix: np.ndarray, sym_tol: float = 1e-9) -> EigenDecomp:
    """Eigendecompose a symmetric matrix, eigenvalues descending.

    The input is symmetrized as (A + Aᵀ)/2 before decomposition to absorb
    accumulation error; asymmetry beyond ``sym_tol`` (scaled by the largest
    entry) is rejected.
    """
    A = np.asarray(matrix, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix contains non-finite entries")
    scale = max(1.0, float(np.abs(A).max()))
    if float(np.abs(A - A.T).max()) > sym_tol * scale:
        raise ValueError("matrix is not symmetric")
    sym = (A + A.T) / 2.0
    w, V = np.linalg.eigh(sym)
    return EigenDecomp(eigenvalues=w[::-1].copy(), eigenvectors=np.ascontiguousarray(V[:, ::-1]))


def power_from_eig(eig: EigenDecomp, exponent: float, floor: float = 0.0) -> np.ndarray:
    """V·diag(max(λ, floor)^exponent)·Vᵀ from a precomputed decomposition."""
    if exponent < 0 and floor <= 0:
        raise ValueError("negative exponent requires a positive eigenvalue floor")
    lam = np.maximum(eig.eigenvalues, floor)
    V = eig.eigenvectors
    out = (V * lam**exponent) @ V.T
    return (out + out.T) / 2.0


def spectral_power(matrix: np.ndarray, exponent: float, floor: float = 0.0) -> np.ndarray:
    """Spectral power of a symmetric PSD matrix.

    Eigenvalues below ``floor`` are replaced by ``floor`` before powering,
    which also clamps the small negative leakage a PSD matrix may carry
    numerically. A negative exponent therefore requires ``floor > 0``.
    """
    return power_from_eig(sym_eig(matrix), exponent, floor)


def numerical_rank(matrix: np.ndarray, rel_tol: float = 1e-8) -> int:
    """Number of singular values exceeding ``rel_tol`` times the largest one."""
    if not 0.0 < rel_tol < 1.0:
        raise ValueError(f"rel_tol must be in (0, 1), got {rel_tol}")
    A = np.asarray(matrix, dtype=float)
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix contains non-finite entries")
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rel_tol * s[0]))
