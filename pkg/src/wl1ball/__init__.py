"""Exact projections onto the weighted l1 ball and weighted simplex.

Four interchangeable solvers (a sort-based oracle, a pivot search, and a
radix-bucket descent with or without online filtering), a projected
gradient sparse-recovery solver built on them, and a benchmark harness.
"""

from .api import (
    Algorithm,
    DEFAULT_ALGORITHM,
    project_simplex,
    project_simplex_with_result,
    project_weighted_l1_ball,
    project_weighted_l1_ball_with_result,
)
from .bucket import (
    BucketState,
    MonotoneKey,
    initial_bucket_state,
    inverse_monotone_key,
    monotone_key,
    project_bucket,
    rho_suffix,
    scatter_pass,
)
from .core import (
    REL_TOL,
    ProblemInstance,
    RatioView,
    ThresholdResult,
    apply_threshold,
    ratio_view,
    simplex_sort,
    subsequence_pivot,
    weighted_l1_norm,
    weighted_simplex_sort,
)
from .pivot import CandidateSet, pivot_update_add, pivot_update_remove, project_pivot
from .sirl1 import (
    InnerResult,
    RecoveryProblem,
    RecoveryReport,
    irl1_weights,
    make_p_schedule,
    sirl1,
    solve_inner,
)
from .vecio import read_vector_file, write_vector_file
from . import errors

__version__ = "0.1.0"

__all__ = [
    "Algorithm",
    "DEFAULT_ALGORITHM",
    "BucketState",
    "CandidateSet",
    "InnerResult",
    "MonotoneKey",
    "ProblemInstance",
    "RatioView",
    "RecoveryProblem",
    "RecoveryReport",
    "REL_TOL",
    "ThresholdResult",
    "apply_threshold",
    "errors",
    "initial_bucket_state",
    "inverse_monotone_key",
    "irl1_weights",
    "make_p_schedule",
    "monotone_key",
    "pivot_update_add",
    "pivot_update_remove",
    "project_bucket",
    "project_pivot",
    "project_simplex",
    "project_simplex_with_result",
    "project_weighted_l1_ball",
    "project_weighted_l1_ball_with_result",
    "ratio_view",
    "read_vector_file",
    "rho_suffix",
    "scatter_pass",
    "simplex_sort",
    "sirl1",
    "solve_inner",
    "subsequence_pivot",
    "weighted_l1_norm",
    "weighted_simplex_sort",
    "write_vector_file",
]
