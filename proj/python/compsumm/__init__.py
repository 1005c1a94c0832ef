"""Comparative prototype summaries of grouped datasets.

Thin wrapper over the C++ core. Prototypes are returned as one list of row
indices per group, in selection order.
"""

from ._compsumm import (
    DataError,
    Dataset,
    NumericError,
    SvmModel,
    ValidationError,
    balanced_accuracy,
    evaluate,
    greedy_select,
    kmeans_summary,
    kmedoids_summary,
    knn1_predict,
    load_usps,
    median_gamma,
    meta_utility,
    mmd2,
    mmd_critic_summary,
    optimize_meta,
    rbf_kernel,
    set_workers,
    snap,
    summarise,
    svm_train,
    utility,
)

__all__ = [
    "DataError",
    "Dataset",
    "NumericError",
    "SvmModel",
    "ValidationError",
    "balanced_accuracy",
    "evaluate",
    "greedy_select",
    "kmeans_summary",
    "kmedoids_summary",
    "knn1_predict",
    "load_usps",
    "median_gamma",
    "meta_utility",
    "mmd2",
    "mmd_critic_summary",
    "optimize_meta",
    "rbf_kernel",
    "set_workers",
    "snap",
    "summarise",
    "svm_train",
    "utility",
]
