"""Synthetic data: polynomial manifolds and uniform observation masks.

Each manifold maps latent columns Z ~ U(−1, 1)^(d×n) through a random
quartic polynomial, X = A·Z + (B·Z^∘2 + C·Z^∘3 + D·Z^∘4)/2 with coefficient
entries ~ N(0, 1), so a single manifold spans at most 4d dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SyntheticSpec:
    """Generator settings: k manifolds of intrinsic dimension d in ambient
    dimension m, n columns each.

    ``quartic_reuses_cubic`` replaces the quartic coefficient matrix with the
    cubic one (an alternative reading of the generator; the default draws a
    fresh matrix D).
    """

    d: int = 2
    m: int = 20
    n: int = 50
    k: int = 1
    coefficient_scale: float = 1.0
    seed: int = 0
    quartic_reuses_cubic: bool = False

    def __post_init__(self):
        if not 1 <= self.d < self.m:
            raise ValueError(f"need 1 <= d < m, got d={self.d}, m={self.m}")
        if self.n < 1 or self.k < 1:
            raise ValueError(f"n and k must be positive, got n={self.n}, k={self.k}")


def manifold_coefficients(rng: np.random.Generator, m: int, d: int, scale: float = 1.0):
    """Four m×d coefficient matrices (linear through quartic terms)."""
    return tuple(scale * rng.standard_normal((m, d)) for _ in range(4))


def evaluate_manifold(coeffs, Z: np.ndarray, quartic_reuses_cubic: bool = False) -> np.ndarray:
    """Map latent columns Z (d×n) into ambient space through one manifold."""
    A, B, C, D = coeffs
    quartic = C if quartic_reuses_cubic else D
    return A @ Z + 0.5 * (B @ Z**2 + C @ Z**3 + quartic @ Z**4)


def generate_synthetic(spec: SyntheticSpec) -> tuple[np.ndarray, np.ndarray]:
    """Generate an m×(k·n) matrix plus the manifold label of each column.

    Coefficients and latents are drawn per manifold from a single generator
    seeded by ``spec.seed``, so output is deterministic given the spec.
    """
    rng = np.random.default_rng(spec.seed)
    blocks = []
    for _ in range(spec.k):
        coeffs = manifold_coefficients(rng, spec.m, spec.d, spec.coefficient_scale)
        Z = rng.uniform(-1.0, 1.0, size=(spec.d, spec.n))
        blocks.append(evaluate_manifold(coeffs, Z, spec.quartic_reuses_cubic))
    labels = np.repeat(np.arange(spec.k), spec.n)
    return np.hstack(blocks), labels


def sample_mask(m: int, n: int, rho: float, seed: int) -> np.ndarray:
    """Boolean m×n mask with exactly round(rho·m·n) observed entries.

    Sampling is uniform without replacement over all entries; nothing
    guarantees every row or column is hit.
    """
    if not 0.0 < rho < 1.0:
        raise ValueError(f"rho must be in (0, 1), got {rho}")
    total = m * n
    count = int(round(rho * total))
    if count < 1:
        raise ValueError(f"rho={rho} leaves no observed entries in an {m}x{n} matrix")
    rng = np.random.default_rng(seed)
    chosen = rng.choice(total, size=count, replace=False)
    mask = np.zeros(total, dtype=bool)
    mask[chosen] = True
    return mask.reshape(m, n)
