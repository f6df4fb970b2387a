"""Rank surrogates of the kernel feature matrix and their majorizer calculus.

Let K = K(X) be the n×n kernel Gram of the columns of X, so the singular
values of the (implicit) feature matrix are σ_i = sqrt(λ_i(K)) with λ
descending. Three surrogates of the feature-matrix rank are supported,
selected by ``RelaxationSpec.kind``:

  r1   Σ_i σ_i^p                Schatten-p quasi-norm, all singular values
  r2   Σ_{i>s} σ_i^p            truncated: only the n−s smallest
  r3   Σ_i w_i σ_i^p            weighted: nondecreasing w against descending σ

r2 and r3 are optimized through variational bounds with an auxiliary
orthonormal factor Θ (the majorant) held fixed during each gradient phase:

  r2   Tr(K^{p/2}) − Tr((PᵀKP)^{p/2}),          P ∈ ℝ^{n×s}, PᵀP = I
  r3   Tr((ΘᵀKΘ)^{p/2}),                        Θ = Q·diag(w)^{1/p}, Q orthogonal

Both bounds are tight when the factor is rebuilt from K's own eigenvectors,
which is exactly what ``compute_majorant`` does.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .kernels import KernelSpec, gram, gram_grad_adjoint
from .spectral import EigenDecomp, power_from_eig, spectral_power, sym_eig

KINDS = ("r1", "r2", "r3")
WEIGHT_RULES = ("given", "linear", "inv_sigma")


@dataclass(frozen=True)
class RelaxationSpec:
    """Which rank surrogate to use and its parameters.

    ``p`` is the singular-value exponent; genuine rank surrogates use
    0 < p ≤ 1, but values up to 2 are accepted (p = 2 reduces r1 to the
    squared Frobenius norm, useful as a diagnostic). ``s`` (r2 only) is the
    number of leading singular values left unpenalized; None defers to the
    solver default. ``weights`` (r3 only) may be given explicitly or left to
    a rule: ``"linear"`` yields (1/n, 2/n, …, 1); ``"inv_sigma"`` yields
    w_i = 1/(σ_i^p + weight_eps) from a preliminary r1 solve.
    """

    kind: str = "r3"
    p: float = 0.5
    s: int | None = None
    weights: np.ndarray | None = None
    weight_rule: str = "linear"
    weight_eps: float = 1e-6

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown relaxation kind {self.kind!r}; expected one of {KINDS}")
        if not 0.0 < self.p <= 2.0:
            raise ValueError(f"p must be in (0, 2], got {self.p}")
        if self.weight_rule not in WEIGHT_RULES:
            raise ValueError(f"unknown weight rule {self.weight_rule!r}")
        if self.s is not None and (int(self.s) != self.s or self.s < 0):
            raise ValueError(f"s must be a non-negative integer, got {self.s}")
        if not self.weight_eps > 0:
            raise ValueError(f"weight_eps must be positive, got {self.weight_eps}")
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float)
            if w.ndim != 1:
                raise ValueError("weights must be a 1-D sequence")
            if np.any(w < 0) or np.any(np.diff(w) < 0):
                raise ValueError("weights must be non-negative and non-decreasing")
            object.__setattr__(self, "weights", w)


@dataclass(frozen=True)
class Majorant:
    """Auxiliary factor fixed during a gradient phase.

    r1: empty (``theta`` is None). r2: ``theta`` = P, n×s with orthonormal
    columns. r3: ``theta`` = Q·diag(w)^{1/p} with Q orthogonal.
    """

    kind: str
    theta: np.ndarray | None = None


def linear_weights(n: int) -> np.ndarray:
    return np.arange(1, n + 1, dtype=float) / n


def inverse_sigma_weights(sigmas: np.ndarray, p: float, eps: float = 1e-6) -> np.ndarray:
    """w_i = 1/(σ_i^p + eps); ascending when σ is given descending."""
    s = np.asarray(sigmas, dtype=float)
    return 1.0 / (np.maximum(s, 0.0) ** p + eps)


def resolve_relaxation(spec: RelaxationSpec, m: int, n: int, sigmas=None) -> RelaxationSpec:
    """Materialize data-dependent fields of a relaxation spec.

    r2 gets its default truncation index s = min(m, n−1); r3 gets a concrete
    weight vector (``sigmas``, descending, is required for the inv_sigma rule).
    """
    if spec.kind == "r2":
        s = spec.s if spec.s is not None else min(m, n - 1)
        if not 0 <= s < n:
            raise ValueError(f"s must satisfy 0 <= s < n={n}, got {s}")
        return replace(spec, s=s)
    if spec.kind == "r3" and spec.weights is None:
        if spec.weight_rule == "linear":
            return replace(spec, weights=linear_weights(n))
        if spec.weight_rule == "inv_sigma":
            if sigmas is None:
                raise ValueError("inv_sigma weights need singular values from a preliminary r1 solve")
            return replace(spec, weights=inverse_sigma_weights(sigmas, spec.p, spec.weight_eps))
        raise ValueError("weight_rule 'given' requires an explicit weight vector")
    if spec.kind == "r3" and spec.weights.shape[0] != n:
        raise ValueError(f"weights length {spec.weights.shape[0]} does not match n={n}")
    return spec


def _concrete(spec: RelaxationSpec, n: int) -> RelaxationSpec:
    """Light resolution usable without knowing m: linear weights only."""
    if spec.kind == "r2":
        if spec.s is None:
            raise ValueError("r2 requires s; use resolve_relaxation to apply the default")
        if not spec.s < n:
            raise ValueError(f"s={spec.s} must be smaller than n={n}")
        return spec
    if spec.kind == "r3":
        if spec.weights is None:
            if spec.weight_rule == "linear":
                return replace(spec, weights=linear_weights(n))
            raise ValueError("r3 weights are unresolved; use resolve_relaxation")
        if spec.weights.shape[0] != n:
            raise ValueError(f"weights length {spec.weights.shape[0]} does not match n={n}")
    return spec


def relaxation_value(K: np.ndarray, spec: RelaxationSpec, *, eig: EigenDecomp | None = None) -> float:
    """Value of the rank surrogate on a PSD Gram matrix: Σ σ_i^p weighted per spec."""
    if eig is None:
        eig = sym_eig(K)
    spec = _concrete(spec, eig.size)
    powers = np.maximum(eig.eigenvalues, 0.0) ** (spec.p / 2.0)
    if spec.kind == "r1":
        return float(powers.sum())
    if spec.kind == "r2":
        return float(powers[spec.s :].sum())
    return float((spec.weights * powers).sum())


def compute_majorant(K: np.ndarray, spec: RelaxationSpec, *, eig: EigenDecomp | None = None) -> Majorant:
    """Refresh the auxiliary factor from the current Gram matrix.

    r2 takes the eigenvectors of the s largest eigenvalues; r3 takes the full
    descending eigenbasis with column i scaled by w_i^{1/p}. Any valid basis
    is acceptable under eigenvalue ties.
    """
    if spec.kind == "r1":
        return Majorant(kind="r1", theta=None)
    if eig is None:
        eig = sym_eig(K)
    spec = _concrete(spec, eig.size)
    if spec.kind == "r2":
        return Majorant(kind="r2", theta=eig.eigenvectors[:, : spec.s].copy())
    theta = eig.eigenvectors * spec.weights ** (1.0 / spec.p)
    return Majorant(kind="r3", theta=theta)


def _check_majorant(majorant: Majorant, spec: RelaxationSpec, n: int) -> None:
    if majorant.kind != spec.kind:
        raise ValueError(f"majorant kind {majorant.kind!r} does not match spec kind {spec.kind!r}")
    if spec.kind == "r1":
        return
    theta = majorant.theta
    if theta is None or theta.shape[0] != n:
        raise ValueError(f"majorant factor must have {n} rows")
    if spec.kind == "r2" and theta.shape[1] != spec.s:
        raise ValueError(f"r2 majorant must have s={spec.s} columns, got {theta.shape[1]}")
    if spec.kind == "r3" and theta.shape[1] != n:
        raise ValueError(f"r3 majorant must be square, got {theta.shape}")


def _floored_half_p_trace(M: np.ndarray, p: float, floor: float) -> float:
    lam = np.linalg.eigvalsh(M)
    return float(np.sum(np.maximum(lam, floor) ** (p / 2.0)))


def majorizer_value(
    K: np.ndarray,
    majorant: Majorant,
    spec: RelaxationSpec,
    floor: float = 0.0,
    *,
    eig: EigenDecomp | None = None,
) -> float:
    """Surrogate value with the auxiliary factor held fixed.

    Coincides with ``relaxation_value`` at the matrix the majorant was built
    from. ``floor`` clamps eigenvalues from below (0 keeps plain PSD clamping).
    """
    K = np.asarray(K, dtype=float)
    n = K.shape[0]
    spec = _concrete(spec, n)
    _check_majorant(majorant, spec, n)
    if spec.kind == "r3":
        theta = majorant.theta
        return _floored_half_p_trace(theta.T @ K @ theta, spec.p, floor)
    if eig is None:
        eig = sym_eig(K)
    total = float(np.sum(np.maximum(eig.eigenvalues, floor) ** (spec.p / 2.0)))
    if spec.kind == "r1":
        return total
    P = majorant.theta
    return total - _floored_half_p_trace(P.T @ K @ P, spec.p, floor)


def majorizer_grad_wrt_gram(
    K: np.ndarray,
    majorant: Majorant,
    spec: RelaxationSpec,
    floor: float,
    *,
    eig: EigenDecomp | None = None,
) -> np.ndarray:
    """Gradient of ``majorizer_value`` with respect to the Gram matrix; symmetric n×n.

    The (p−2)/2 exponent is negative for p < 2, so ``floor`` must be positive
    unless p = 2.
    """
    K = np.asarray(K, dtype=float)
    n = K.shape[0]
    spec = _concrete(spec, n)
    _check_majorant(majorant, spec, n)
    half_p = spec.p / 2.0
    inner_exp = (spec.p - 2.0) / 2.0
    if spec.kind == "r3":
        theta = majorant.theta
        M = half_p * spectral_power(theta.T @ K @ theta, inner_exp, floor)
        G = theta @ M @ theta.T
        return (G + G.T) / 2.0
    if eig is None:
        eig = sym_eig(K)
    G = half_p * power_from_eig(eig, inner_exp, floor)
    if spec.kind == "r1":
        return G
    P = majorant.theta
    H = half_p * spectral_power(P.T @ K @ P, inner_exp, floor)
    G = G - P @ H @ P.T
    return (G + G.T) / 2.0


def majorizer_gradient(
    X: np.ndarray,
    mask: np.ndarray,
    kernel: KernelSpec,
    majorant: Majorant,
    spec: RelaxationSpec,
    floor: float = 1e-6,
    fit: tuple[float, np.ndarray] | None = None,
    *,
    gram_matrix: np.ndarray | None = None,
    eig: EigenDecomp | None = None,
) -> np.ndarray:
    """Gradient of the majorized objective with respect to the data matrix.

    Hard mode (``fit`` is None): entries at observed positions (mask True)
    are zeroed, since only missing entries are free. Soft mode: ``fit`` is a
    ``(penalty, reference)`` pair adding penalty·(X − reference) at observed
    positions while leaving every entry free.

    ``gram_matrix``/``eig`` may carry a precomputed Gram of X and its
    decomposition to avoid recomputation inside the solver loop.
    """
    X = np.asarray(X, dtype=float)
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != X.shape:
        raise ValueError(f"mask shape {mask.shape} does not match X shape {X.shape}")
    K = gram(X, kernel) if gram_matrix is None else gram_matrix
    spec = _concrete(spec, K.shape[0])
    G = majorizer_grad_wrt_gram(K, majorant, spec, floor, eig=eig)
    grad = gram_grad_adjoint(X, kernel, G)
    if fit is None:
        grad[mask] = 0.0
    else:
        penalty, reference = fit
        grad = grad + penalty * np.where(mask, X - reference, 0.0)
    return grad
