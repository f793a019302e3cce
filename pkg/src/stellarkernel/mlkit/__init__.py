"""Datasets, Gram matrices and kernel SVMs for the stellar kernels."""

from .datasets import Dataset, DatasetSpec, flip_upper_half, make_annular
from .experiment import (
    ExperimentReport,
    bandwidth_sweep,
    decision_grid,
    gaussian_baseline,
    run_experiment,
    write_grid_csv,
)
from .kernels import FAMILIES, GramMatrix, KernelSpec, encode_point, gram, kernel_value
from .svm import SMOResult, StellarKernelSVC, StellarKernelTransformer, smo_solve

__all__ = [
    "Dataset",
    "DatasetSpec",
    "ExperimentReport",
    "FAMILIES",
    "GramMatrix",
    "KernelSpec",
    "SMOResult",
    "StellarKernelSVC",
    "StellarKernelTransformer",
    "bandwidth_sweep",
    "decision_grid",
    "encode_point",
    "flip_upper_half",
    "gaussian_baseline",
    "gram",
    "kernel_value",
    "make_annular",
    "run_experiment",
    "smo_solve",
    "write_grid_csv",
]
