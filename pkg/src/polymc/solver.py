"""Adaptive-step Adam loop driving majorant refreshes and gradient steps.

Each iteration eigendecomposes the kernel Gram of the current iterate,
rebuilds the majorant from it, takes one bias-corrected Adam step on the
free entries, and then rescales the step size: shrink by ``step_down`` when
the objective rose, grow by ``step_up`` otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .exceptions import NothingToCompleteError, SolverError
from .kernels import KernelSpec, gram
from .masked import MaskedMatrix
from .objectives import (
    RelaxationSpec,
    compute_majorant,
    majorizer_gradient,
    relaxation_value,
    resolve_relaxation,
)
from .spectral import sym_eig

MODES = ("hard", "soft")
INITS = ("zero", "column_mean")


@dataclass(frozen=True)
class SolverConfig:
    """Completion solver settings.

    ``mode`` is "hard" (observed entries are equality constraints; only the
    missing entries move) or "soft" (every entry moves, observed entries are
    tied to their data by a quadratic penalty of weight ``penalty``).
    ``step`` is the initial step size, adapted multiplicatively by
    ``step_down``/``step_up``. ``floor`` clamps Gram eigenvalues inside the
    negative-exponent gradient powers. ``tol`` stops the loop once the
    largest absolute parameter change falls below it.
    """

    relaxation: RelaxationSpec = field(default_factory=RelaxationSpec)
    kernel: KernelSpec = field(default_factory=KernelSpec)
    mode: str = "hard"
    penalty: float = 1.0
    step: float = 1e-4
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    floor: float = 1e-6
    tol: float = 1e-6
    t_max: int = 1000
    step_down: float = 0.8
    step_up: float = 1.1
    seed: int = 0
    init: str = "zero"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.init not in INITS:
            raise ValueError(f"unknown init {self.init!r}; expected one of {INITS}")
        if not 0.0 < self.beta1 < self.beta2 < 1.0:
            raise ValueError(f"need 0 < beta1 < beta2 < 1, got beta1={self.beta1}, beta2={self.beta2}")
        for name in ("penalty", "step", "adam_eps", "floor", "tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if not 0.0 < self.step_down < 1.0 < self.step_up:
            raise ValueError(
                f"need 0 < step_down < 1 < step_up, got {self.step_down}, {self.step_up}"
            )
        if self.t_max < 1:
            raise ValueError(f"t_max must be at least 1, got {self.t_max}")


@dataclass(frozen=True)
class CompletionResult:
    """Outcome of a completion solve.

    ``objective_trace[t]`` is the objective value after iteration t+1, so its
    length equals ``iterations``. ``termination`` is "tolerance" or "max_iter".
    """

    X_hat: np.ndarray
    objective_trace: np.ndarray
    iterations: int
    termination: str
    final_step: float


class AdamState:
    """First/second-moment accumulators with bias correction."""

    def __init__(self, size: int, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = np.zeros(size)
        self.v = np.zeros(size)

    def update(self, grad: np.ndarray, step: float) -> np.ndarray:
        """Advance one step and return the parameter delta (to be added)."""
        self.t += 1
        self.m = self.beta1 * self.m + (1.0 - self.beta1) * grad
        self.v = self.beta2 * self.v + (1.0 - self.beta2) * grad**2
        m_hat = self.m / (1.0 - self.beta1**self.t)
        v_hat = self.v / (1.0 - self.beta2**self.t)
        return -step * m_hat / (np.sqrt(v_hat) + self.eps)


def adapt_step(step: float, current: float, previous: float, down: float = 0.8, up: float = 1.1) -> float:
    """Shrink the step when the objective rose, grow it otherwise."""
    return step * down if current > previous else step * up


def _observed_residual(X: np.ndarray, masked: MaskedMatrix) -> float:
    diff = X[masked.mask] - masked.values[masked.mask]
    return float(diff @ diff)


def kernel_complete(masked: MaskedMatrix, config: SolverConfig | None = None) -> CompletionResult:
    """Complete a masked matrix by minimizing a kernel-space rank surrogate.

    Missing entries start at zero (or the observed column mean when
    ``config.init`` is "column_mean"); the RBF bandwidth, when unresolved, is
    fixed from that initialization and frozen. In hard mode the observed
    entries are never touched and come back bit-identical.

    Raises ``NothingToCompleteError`` for an all-observed matrix in hard mode
    and ``SolverError`` (carrying the last finite iterate) on divergence.
    """
    config = SolverConfig() if config is None else config
    hard = config.mode == "hard"
    if hard and masked.n_missing == 0:
        raise NothingToCompleteError("hard-mode completion of a fully observed matrix: nothing to complete")

    m, n = masked.shape
    X = masked.filled(0.0) if config.init == "zero" else masked.column_mean_filled()
    kernel = config.kernel.resolve(X)

    relax = config.relaxation
    if relax.kind == "r3" and relax.weights is None and relax.weight_rule == "inv_sigma":
        pre_cfg = replace(config, relaxation=RelaxationSpec(kind="r1", p=relax.p), kernel=kernel)
        pre = kernel_complete(masked, pre_cfg)
        pre_eig = sym_eig(gram(pre.X_hat, kernel))
        sigmas = np.sqrt(np.maximum(pre_eig.eigenvalues, 0.0))
        relax = resolve_relaxation(relax, m, n, sigmas=sigmas)
    else:
        relax = resolve_relaxation(relax, m, n)

    free = ~masked.mask if hard else np.ones_like(masked.mask)
    fit = None if hard else (config.penalty, masked.filled(0.0))

    def objective(eig, X_cur):
        val = relaxation_value(None, relax, eig=eig)
        if not hard:
            val += 0.5 * config.penalty * _observed_residual(X_cur, masked)
        return val

    adam = AdamState(int(free.sum()), config.beta1, config.beta2, config.adam_eps)
    step = config.step
    K = gram(X, kernel)
    eig = sym_eig(K)
    previous = objective(eig, X)
    trace = []
    termination = "max_iter"
    iterations = 0

    for t in range(1, config.t_max + 1):
        majorant = compute_majorant(K, relax, eig=eig)
        grad = majorizer_gradient(
            X, masked.mask, kernel, majorant, relax, config.floor, fit, gram_matrix=K, eig=eig
        )
        delta = adam.update(grad[free], step)
        if not np.all(np.isfinite(delta)):
            raise SolverError(f"non-finite update at iteration {t}", last_iterate=X.copy())
        X[free] += delta
        K = gram(X, kernel) if np.all(np.isfinite(X)) else np.full((n, n), np.nan)
        if not np.all(np.isfinite(K)):
            X[free] -= delta
            raise SolverError(f"objective diverged at iteration {t}", last_iterate=X.copy())
        eig = sym_eig(K)
        current = objective(eig, X)
        iterations = t
        if not np.isfinite(current):
            X[free] -= delta
            raise SolverError(f"objective diverged at iteration {t}", last_iterate=X.copy())
        trace.append(current)
        step = adapt_step(step, current, previous, config.step_down, config.step_up)
        previous = current
        if float(np.abs(delta).max()) < config.tol:
            termination = "tolerance"
            break

    return CompletionResult(
        X_hat=X,
        objective_trace=np.asarray(trace),
        iterations=iterations,
        termination=termination,
        final_step=step,
    )
