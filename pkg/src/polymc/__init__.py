"""polymc: completion of high-rank matrices with low intrinsic dimension.

Columns (or samples, in the estimator API) are assumed to lie on one or
several low-dimensional polynomial manifolds; completion minimizes a
Schatten-type rank surrogate of the kernel Gram matrix with an adaptive-step
Adam loop. A nuclear-norm baseline, synthetic benchmark harness,
degrees-of-freedom calculators, and a transductive classification mode are
included.
"""

from .complexity import ComplexityReport, binom, complexity_report, r_tilde
from .estimators import CompletionClassifier, KernelMatrixCompletion, NuclearNormCompletion
from .exceptions import DataError, NothingToCompleteError, SolverError
from .kernels import (
    KernelSpec,
    explicit_feature_map,
    explicit_feature_matrix,
    gram,
    gram_grad_adjoint,
    resolve_bandwidth,
)
from .masked import MaskedMatrix
from .matrix_io import read_masked_csv, write_completed_csv, write_masked_csv
from .metrics import rae, rse
from .nuclear import NuclearNormConfig, nuclear_complete, soft_threshold_singular_values
from .objectives import (
    Majorant,
    RelaxationSpec,
    compute_majorant,
    majorizer_gradient,
    majorizer_value,
    relaxation_value,
    resolve_relaxation,
)
from .bench import METHODS, run_grid, run_method, write_plot_data, write_result_table
from .solver import AdamState, CompletionResult, SolverConfig, adapt_step, kernel_complete
from .spectral import EigenDecomp, numerical_rank, spectral_power, sym_eig
from .synthetic import SyntheticSpec, generate_synthetic, sample_mask
from .transductive import TransductiveTask, build_transductive, decode_labels, one_hot

__version__ = "0.1.0"

__all__ = [
    "AdamState",
    "CompletionClassifier",
    "CompletionResult",
    "ComplexityReport",
    "DataError",
    "EigenDecomp",
    "KernelMatrixCompletion",
    "KernelSpec",
    "Majorant",
    "MaskedMatrix",
    "METHODS",
    "NothingToCompleteError",
    "NuclearNormCompletion",
    "NuclearNormConfig",
    "RelaxationSpec",
    "SolverConfig",
    "SolverError",
    "SyntheticSpec",
    "TransductiveTask",
    "adapt_step",
    "binom",
    "build_transductive",
    "complexity_report",
    "compute_majorant",
    "decode_labels",
    "explicit_feature_map",
    "explicit_feature_matrix",
    "generate_synthetic",
    "gram",
    "gram_grad_adjoint",
    "kernel_complete",
    "majorizer_gradient",
    "majorizer_value",
    "nuclear_complete",
    "numerical_rank",
    "one_hot",
    "r_tilde",
    "rae",
    "read_masked_csv",
    "relaxation_value",
    "resolve_bandwidth",
    "resolve_relaxation",
    "rse",
    "run_grid",
    "run_method",
    "sample_mask",
    "soft_threshold_singular_values",
    "spectral_power",
    "sym_eig",
    "write_completed_csv",
    "write_masked_csv",
    "write_plot_data",
    "write_result_table",
]
