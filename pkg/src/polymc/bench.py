"""Experiment grid runner: methods x sampling rates x sizes x trials.

Every (rho, n, trial) cell gets one synthetic instance shared by all
methods, with seeds derived deterministically from the grid seed, so tables
are reproducible and method comparisons are paired.
"""

from __future__ import annotations

import csv
import time
from dataclasses import replace
from pathlib import Path

import numpy as np
from joblib import Parallel, delayed

from .exceptions import DataError, SolverError
from .masked import MaskedMatrix
from .metrics import rae, rse
from .nuclear import NuclearNormConfig, nuclear_complete
from .solver import CompletionResult, SolverConfig, kernel_complete
from .synthetic import SyntheticSpec, generate_synthetic, sample_mask

KERNEL_METHODS = ("kmc-r1", "kmc-r2", "kmc-r3")
METHODS = KERNEL_METHODS + ("nuclear",)
METRICS = {"rse": rse, "rae": rae}

RESULT_COLUMNS = ("method", "rho", "n", "k", "trial", "metric_name", "metric_value", "seconds")


def run_method(
    name: str,
    masked: MaskedMatrix,
    solver: SolverConfig | None = None,
    nuclear: NuclearNormConfig | None = None,
) -> CompletionResult:
    """Run one registered completion method on a masked matrix."""
    if name == "nuclear":
        return nuclear_complete(masked, nuclear)
    if name not in KERNEL_METHODS:
        raise ValueError(f"unknown method {name!r}; expected one of {METHODS}")
    base = SolverConfig() if solver is None else solver
    kind = name.split("-")[1]
    cfg = replace(base, relaxation=replace(base.relaxation, kind=kind))
    return kernel_complete(masked, cfg)


def _cell_seeds(seed: int, rho: float, n: int, trial: int) -> tuple[int, int]:
    ss = np.random.SeedSequence((seed, int(round(rho * 1e9)), n, trial))
    data_seed, mask_seed = ss.generate_state(2)
    return int(data_seed), int(mask_seed)


def make_instance(
    rho: float, n: int, *, d: int, m: int, k: int, seed: int, trial: int, coefficient_scale: float = 1.0
) -> tuple[np.ndarray, MaskedMatrix]:
    """Deterministic synthetic instance for one grid cell and trial."""
    data_seed, mask_seed = _cell_seeds(seed, rho, n, trial)
    X, _ = generate_synthetic(
        SyntheticSpec(d=d, m=m, n=n, k=k, coefficient_scale=coefficient_scale, seed=data_seed)
    )
    mask = sample_mask(m, k * n, rho, mask_seed)
    return X, MaskedMatrix(np.where(mask, X, np.nan), mask)


def run_grid(
    methods,
    rho_grid,
    n_grid,
    *,
    d: int = 2,
    m: int = 20,
    k: int = 1,
    trials: int = 10,
    seed: int = 0,
    metric: str = "rse",
    solver: SolverConfig | None = None,
    nuclear: NuclearNormConfig | None = None,
    n_jobs: int = 1,
) -> list[dict]:
    """Run every method on every grid cell and trial; one row per solve.

    Failed solves are kept as rows with a NaN metric so the grid keeps going.
    Rows come back sorted by (method, rho, n, trial), independent of worker
    scheduling.
    """
    methods = list(methods)
    rho_grid = list(rho_grid)
    n_grid = list(n_grid)
    if not methods or not rho_grid or not n_grid or trials < 1:
        raise ValueError("methods, rho_grid, n_grid must be non-empty and trials >= 1")
    for name in methods:
        if name not in METHODS:
            raise ValueError(f"unknown method {name!r}; expected one of {METHODS}")
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; expected one of {tuple(METRICS)}")
    metric_fn = METRICS[metric]

    def one(method, rho, n, trial):
        X, masked = make_instance(rho, n, d=d, m=m, k=k, seed=seed, trial=trial)
        start = time.perf_counter()
        try:
            result = run_method(method, masked, solver=solver, nuclear=nuclear)
            value = metric_fn(X, result.X_hat, masked.mask)
        except (SolverError, DataError, ValueError):
            value = float("nan")
        return {
            "method": method,
            "rho": rho,
            "n": n,
            "k": k,
            "trial": trial,
            "metric_name": metric,
            "metric_value": value,
            "seconds": time.perf_counter() - start,
        }

    jobs = [
        (method, rho, n, trial)
        for method in methods
        for rho in rho_grid
        for n in n_grid
        for trial in range(trials)
    ]
    if n_jobs == 1:
        rows = [one(*job) for job in jobs]
    else:
        rows = Parallel(n_jobs=n_jobs)(delayed(one)(*job) for job in jobs)
    rows.sort(key=lambda r: (r["method"], r["rho"], r["n"], r["trial"]))
    return rows


def write_result_table(rows, path) -> None:
    """Write grid rows as CSV with the fixed column schema."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RESULT_COLUMNS)
        for row in rows:
            writer.writerow([row[col] for col in RESULT_COLUMNS])


def write_plot_data(rows, out_dir) -> list[Path]:
    """Emit one plot-data CSV per method and swept axis: x, mean metric.

    An axis (rho or n) is swept when it takes more than one value; when
    neither does, a single-point rho series is still written.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = list(rows)
    if not rows:
        raise ValueError("no rows to plot")
    metric = rows[0]["metric_name"]
    axes = [axis for axis in ("rho", "n") if len({row[axis] for row in rows}) > 1] or ["rho"]
    written = []
    for axis in axes:
        for method in sorted({row["method"] for row in rows}):
            series = {}
            for row in rows:
                if row["method"] == method:
                    series.setdefault(row[axis], []).append(row["metric_value"])
            path = out_dir / f"plot_{metric}_vs_{axis}_{method}.csv"
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow([axis, f"mean_{metric}"])
                for x in sorted(series):
                    values = [v for v in series[x] if np.isfinite(v)]
                    mean = float(np.mean(values)) if values else float("nan")
                    writer.writerow([x, mean])
            written.append(path)
    return written
