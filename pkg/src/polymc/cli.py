"""Command-line interface: complete, synth, bench, classify, mnp.

Exit codes: 0 success, 1 usage error, 2 data error, 3 solver failure.
Every run echoes its resolved configuration (JSON, one line) to stderr so
results can be reproduced from logs alone.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .bench import METHODS, run_grid, write_plot_data, write_result_table
from .complexity import complexity_report
from .exceptions import DataError, SolverError
from .kernels import KernelSpec
from .matrix_io import read_masked_csv, write_completed_csv
from .objectives import RelaxationSpec
from .solver import SolverConfig, kernel_complete
from .nuclear import NuclearNormConfig
from .transductive import build_transductive, decode_labels

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_SOLVER = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


# flag name -> argparse settings; defaults live here so --help shows them all
_SOLVER_OPTIONS = {
    "kernel": dict(choices=["rbf", "poly"], default="rbf"),
    "poly-order": dict(type=int, default=2),
    "poly-offset": dict(type=float, default=1.0),
    "sigma": dict(default="auto", help="RBF bandwidth, a number or 'auto'"),
    "sigma-scale": dict(type=float, default=1.0, help="multiplier for the auto bandwidth"),
    "relaxation": dict(choices=["r1", "r2", "r3"], default="r3"),
    "p": dict(type=float, default=0.5),
    "s": dict(type=int, default=None, help="truncation index for r2 (default: row count)"),
    "weights": dict(choices=["linear", "inv-sigma"], default="linear"),
    "mode": dict(choices=["hard", "soft"], default="hard"),
    "lambda": dict(type=float, default=1.0, help="observed-residual penalty in soft mode"),
    "step": dict(type=float, default=1e-4, help="initial step size"),
    "tmax": dict(type=int, default=1000),
    "tol": dict(type=float, default=1e-6),
    "seed": dict(type=int, default=0),
    "init": dict(choices=["zero", "column_mean"], default="zero"),
}

_NUCLEAR_OPTIONS = {
    "shrinkage": dict(default="auto"),
    "max-iters": dict(type=int, default=500),
    "tol": dict(type=float, default=1e-6),
    "step": dict(type=float, default=1.0),
}


def _add_options(parser, table):
    for name, spec in table.items():
        kwargs = dict(spec)
        default = kwargs.pop("default")
        help_text = kwargs.pop("help", "")
        suffix = f" (default: {default})"
        parser.add_argument(f"--{name}", default=None, help=(help_text + suffix).strip(), **kwargs)


def _load_json(path, what):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise _UsageError(f"cannot read {what} {path}: {exc}") from exc
    try:
        loaded = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _UsageError(f"{what} {path} is not valid JSON: {exc}") from exc
    if not isinstance(loaded, dict):
        raise _UsageError(f"{what} {path} must contain a JSON object")
    return loaded


def _resolve_options(table, args, config=None):
    """Defaults, overridden by config-file values, overridden by explicit flags."""
    resolved = {name: spec["default"] for name, spec in table.items()}
    if config:
        unknown = sorted(set(config) - set(table))
        if unknown:
            raise _UsageError(f"unknown config keys: {', '.join(unknown)}")
        resolved.update(config)
    for name in table:
        value = getattr(args, name.replace("-", "_"), None)
        if value is not None:
            resolved[name] = value
    return resolved


def _solver_config(options) -> SolverConfig:
    sigma = options["sigma"]
    if isinstance(sigma, str):
        if sigma == "auto":
            bandwidth = None
        else:
            try:
                bandwidth = float(sigma)
            except ValueError:
                raise _UsageError(f"--sigma must be a number or 'auto', got {sigma!r}") from None
    else:
        bandwidth = float(sigma)
    kernel = KernelSpec(
        family="rbf" if options["kernel"] == "rbf" else "polynomial",
        poly_order=int(options["poly-order"]),
        offset=float(options["poly-offset"]),
        bandwidth=bandwidth,
        auto_scale=float(options["sigma-scale"]),
    )
    relaxation = RelaxationSpec(
        kind=options["relaxation"],
        p=float(options["p"]),
        s=None if options["s"] is None else int(options["s"]),
        weight_rule={"linear": "linear", "inv-sigma": "inv_sigma"}[options["weights"]],
    )
    return SolverConfig(
        relaxation=relaxation,
        kernel=kernel,
        mode=options["mode"],
        penalty=float(options["lambda"]),
        step=float(options["step"]),
        tol=float(options["tol"]),
        t_max=int(options["tmax"]),
        seed=int(options["seed"]),
        init=options["init"],
    )


def _nuclear_config(options) -> NuclearNormConfig:
    shrinkage = options["shrinkage"]
    if isinstance(shrinkage, str) and shrinkage != "auto":
        try:
            shrinkage = float(shrinkage)
        except ValueError:
            raise _UsageError(f"shrinkage must be a number or 'auto', got {shrinkage!r}") from None
    return NuclearNormConfig(
        shrinkage=shrinkage,
        max_iters=int(options["max-iters"]),
        tol=float(options["tol"]),
        step=float(options["step"]),
    )


def _log_config(command, payload):
    print(f"{command} config: {json.dumps(payload, sort_keys=True, default=str)}", file=sys.stderr)


def _cmd_complete(args) -> int:
    config = _load_json(args.config, "config file") if args.config else None
    options = _resolve_options(_SOLVER_OPTIONS, args, config)
    _log_config("complete", options | {"input": args.input, "output": args.output})
    masked = read_masked_csv(args.input)
    result = kernel_complete(masked, _solver_config(options))
    write_completed_csv(result.X_hat, args.output)
    print(
        f"completed {masked.shape[0]}x{masked.shape[1]} matrix: "
        f"{result.iterations} iterations, termination {result.termination}",
        file=sys.stderr,
    )
    return EXIT_OK


def _cmd_synth(args) -> int:
    payload = {
        "d": args.d, "m": args.m, "n": args.n, "k": args.k,
        "rho": args.rho, "trials": args.trials, "seed": args.seed,
        "out": args.out, "jobs": args.jobs,
    }
    _log_config("synth", payload)
    rows = run_grid(
        METHODS, [args.rho], [args.n],
        d=args.d, m=args.m, k=args.k, trials=args.trials, seed=args.seed,
        n_jobs=args.jobs,
    )
    write_result_table(rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out}", file=sys.stderr)
    return EXIT_OK


def _cmd_bench(args) -> int:
    grid = _load_json(args.grid, "grid file")
    known = {"methods", "rho", "n", "d", "m", "k", "trials", "seed", "metric", "jobs", "solver", "nuclear"}
    unknown = sorted(set(grid) - known)
    if unknown:
        raise _UsageError(f"unknown grid keys: {', '.join(unknown)}")
    for key in ("methods", "rho", "n"):
        if key not in grid:
            raise _UsageError(f"grid file must define {key!r}")
    as_list = lambda v: list(v) if isinstance(v, (list, tuple)) else [v]
    solver = None
    if grid.get("solver"):
        solver = _solver_config(_resolve_options(_SOLVER_OPTIONS, args=argparse.Namespace(), config=grid["solver"]))
    nuclear = None
    if grid.get("nuclear"):
        nuclear = _nuclear_config(_resolve_options(_NUCLEAR_OPTIONS, args=argparse.Namespace(), config=grid["nuclear"]))
    jobs = args.jobs if args.jobs is not None else int(grid.get("jobs", os.cpu_count() or 1))
    _log_config("bench", grid | {"out": args.out, "jobs": jobs})
    rows = run_grid(
        as_list(grid["methods"]),
        as_list(grid["rho"]),
        as_list(grid["n"]),
        d=int(grid.get("d", 2)),
        m=int(grid.get("m", 20)),
        k=int(grid.get("k", 1)),
        trials=int(grid.get("trials", 10)),
        seed=int(grid.get("seed", 0)),
        metric=grid.get("metric", "rse"),
        solver=solver,
        nuclear=nuclear,
        n_jobs=jobs,
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_result_table(rows, out_dir / "results.csv")
    plots = write_plot_data(rows, out_dir)
    print(f"wrote {len(rows)} rows and {len(plots)} plot files to {out_dir}", file=sys.stderr)
    return EXIT_OK


def _read_labels(path) -> np.ndarray:
    """Labels CSV: a single row/column of class indices, or a one-hot block."""
    matrix = read_masked_csv(path)
    if not matrix.mask.all():
        raise DataError(f"{path}: label files must not contain missing cells")
    values = matrix.values
    if values.shape[0] == 1 or values.shape[1] == 1:
        flat = values.ravel()
        if np.any(flat != flat.astype(int)):
            raise DataError(f"{path}: class labels must be integers")
        return flat.astype(int)
    return values


def _cmd_classify(args) -> int:
    config = _load_json(args.config, "config file") if args.config else None
    options = _resolve_options(_SOLVER_OPTIONS, args, config)
    _log_config("classify", options | {
        "train-features": args.train_features, "train-labels": args.train_labels,
        "test-features": args.test_features, "theta": args.theta, "out": args.out,
    })
    train = read_masked_csv(args.train_features)
    test = read_masked_csv(args.test_features)
    labels = _read_labels(args.train_labels)
    feature_mask = np.hstack([train.mask, test.mask])
    if args.theta > 0.0:
        if not args.theta < 1.0:
            raise _UsageError(f"--theta must be in [0, 1), got {args.theta}")
        rng = np.random.default_rng(int(options["seed"]))
        observed = np.flatnonzero(feature_mask.ravel())
        hide = rng.choice(observed, size=int(round(args.theta * observed.size)), replace=False)
        flat = feature_mask.ravel()
        flat[hide] = False
        feature_mask = flat.reshape(feature_mask.shape)
    masked, task = build_transductive(
        train.filled(0.0), labels, test.filled(0.0), feature_mask=feature_mask
    )
    result = kernel_complete(masked, _solver_config(options))
    predictions, error = decode_labels(result.X_hat, task)
    write_completed_csv(predictions[np.newaxis, :].astype(float), args.out)
    if args.test_labels:
        truth = _read_labels(args.test_labels)
        if truth.ndim != 1:
            raise DataError(f"{args.test_labels}: expected a vector of class indices")
        _, error = decode_labels(result.X_hat, task, truth)
        print(f"classification_error: {error}")
    else:
        print(f"predicted {task.n_test} labels")
    return EXIT_OK


def _cmd_mnp(args) -> int:
    _log_config("mnp", {
        "m": args.m, "n": args.n, "q": args.q, "d": args.d,
        "alpha": args.alpha, "k": args.k, "d-tilde": args.d_tilde,
    })
    report = complexity_report(
        m=args.m, n=args.n, d=args.d, alpha=args.alpha, q=args.q, k=args.k, d_tilde=args.d_tilde
    )
    print(f"d_tilde: {report.d_tilde}")
    print(f"r_tilde: {report.r_tilde}")
    print(f"mnp_phi: {report.mnp_phi}")
    if report.mnp_linear is not None:
        print(f"mnp_linear: {report.mnp_linear}")
    print(f"sampling_lower_bound: {report.sampling_lower_bound:.6g}")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="polymc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("complete", help="complete a masked CSV matrix (columns are data points)")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--config", default=None, help="JSON file mirroring the flag names")
    _add_options(p, _SOLVER_OPTIONS)
    p.set_defaults(func=_cmd_complete)

    p = sub.add_parser("synth", help="generate one synthetic cell and run all built-in methods")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--m", type=int, default=20)
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--rho", type=float, default=0.5)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("bench", help="run a JSON-described experiment grid")
    p.add_argument("--grid", required=True, help="JSON grid description")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--jobs", type=int, default=None)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("classify", help="transductive classification via completion")
    p.add_argument("--train-features", required=True)
    p.add_argument("--train-labels", required=True)
    p.add_argument("--test-features", required=True)
    p.add_argument("--test-labels", default=None)
    p.add_argument("--theta", type=float, default=0.0, help="extra fraction of feature cells to hide")
    p.add_argument("--out", required=True)
    p.add_argument("--config", default=None, help="JSON file mirroring the solver flag names")
    _add_options(p, _SOLVER_OPTIONS)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("mnp", help="degrees-of-freedom and sampling-bound calculator")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--alpha", type=int, default=None)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--d-tilde", type=int, default=None)
    p.set_defaults(func=_cmd_mnp)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
