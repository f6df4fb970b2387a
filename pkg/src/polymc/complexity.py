"""Degrees-of-freedom calculators and sampling-rate lower bounds.

For data whose feature matrix under an order-q polynomial map has rank
d_tilde, the minimum number of parameters determining the matrix is
(m − r_tilde)·d_tilde + n·r_tilde, where r_tilde is the smallest ambient
dimension whose order-q monomial count reaches d_tilde. Dividing by m·n
gives the reference sampling-rate curve plotted by the benchmark harness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


def binom(a: int, b: int) -> int:
    """Exact binomial coefficient; zero when b > a. Arbitrary precision."""
    if a < 0 or b < 0:
        raise ValueError(f"binom requires non-negative integers, got ({a}, {b})")
    return math.comb(a, b)


def r_tilde(d_tilde: int, q: int) -> int:
    """Smallest o with C(o+q, q) >= d_tilde.

    Searched inside the bracket [(q!·d_tilde)^{1/q} − q, (q!·d_tilde)^{1/q}],
    which needs at most q+1 trials; the scan below stays correct even if
    floating-point fuzz shifts the starting point.
    """
    if d_tilde < 1 or q < 1:
        raise ValueError(f"d_tilde and q must be positive, got ({d_tilde}, {q})")
    start = max(0, math.floor((math.factorial(q) * d_tilde) ** (1.0 / q)) - q)
    o = start
    while binom(o + q, q) < d_tilde:
        o += 1
    while o > 0 and binom(o - 1 + q, q) >= d_tilde:
        o -= 1
    return o


@dataclass(frozen=True)
class ComplexityReport:
    """Feature-space rank, its matching ambient rank, and parameter counts.

    ``mnp_phi`` counts parameters for the feature-rank model; ``mnp_linear``
    counts them for the plain rank-r model (None when the data order needed
    to derive r was not supplied). ``sampling_lower_bound`` is mnp_phi/(m·n)
    clamped to at most 1.
    """

    d_tilde: int
    r_tilde: int
    mnp_phi: int
    mnp_linear: int | None
    sampling_lower_bound: float


def complexity_report(
    m: int,
    n: int,
    d: int | None = None,
    alpha: int | None = None,
    q: int = 3,
    k: int = 1,
    d_tilde: int | None = None,
) -> ComplexityReport:
    """Build a ComplexityReport for k manifolds of intrinsic dimension d.

    Unless overridden, d_tilde defaults to the generic feature-rank bound
    min{k·C(d+αq, αq), C(m+q, q), n}; real data often has smaller feature
    rank, hence the numeric override. An override is still capped by the
    structural limits C(m+q, q) and n that hold for any m×n matrix.
    """
    if m < 1 or n < 1 or q < 1 or k < 1:
        raise ValueError("m, n, q, k must be positive integers")
    if d_tilde is None:
        if d is None or alpha is None:
            raise ValueError("either d_tilde or both d and alpha must be given")
        d_tilde = k * binom(d + alpha * q, alpha * q)
    elif d_tilde < 1:
        raise ValueError(f"d_tilde must be positive, got {d_tilde}")
    d_tilde = min(d_tilde, binom(m + q, q), n)

    rt = r_tilde(d_tilde, q)
    mnp_phi = (m - rt) * d_tilde + n * rt

    mnp_linear = None
    if d is not None and alpha is not None:
        r = min(k * binom(d + alpha, alpha), m, n)
        mnp_linear = (m - r) * r + n * r

    return ComplexityReport(
        d_tilde=d_tilde,
        r_tilde=rt,
        mnp_phi=mnp_phi,
        mnp_linear=mnp_linear,
        sampling_lower_bound=min(1.0, mnp_phi / (m * n)),
    )
