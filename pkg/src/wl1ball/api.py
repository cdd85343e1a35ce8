"""Public entry points: weighted l1-ball and weighted-simplex projection.

The ball projection decomposes by sign: project ``|y|`` onto the weighted
simplex, then restore signs.  Points already inside the ball are returned
unchanged.  Zero-weight coordinates are handled here so the solver
backends only ever see strictly positive weights: such coordinates do not
enter the constraint, and the shared thresholding step maps them to
``y_i`` on the ball path and ``max(y_i, 0)`` on the simplex path.
"""

from __future__ import annotations

import enum

import numpy as np

from .bucket import project_bucket
from .core import (
    ProblemInstance,
    ThresholdResult,
    apply_threshold,
    weighted_l1_norm,
)
from .errors import InvalidRadius, NegativeRadius
from .pivot import project_pivot
from .core import weighted_simplex_sort


class Algorithm(str, enum.Enum):
    """Selectable solver backends; all produce the same projection."""

    SORT = "sort"
    PIVOT = "pivot"
    BUCKET = "bucket"
    BUCKET_FILTER = "bucket-filter"


DEFAULT_ALGORITHM = Algorithm.BUCKET_FILTER


def _dispatch(instance: ProblemInstance, algo: Algorithm):
    algo = Algorithm(algo)
    if algo is Algorithm.SORT:
        return weighted_simplex_sort(instance)
    if algo is Algorithm.PIVOT:
        return project_pivot(instance)
    if algo is Algorithm.BUCKET:
        return project_bucket(instance, filtering=False)
    return project_bucket(instance, filtering=True)


def project_simplex_with_result(
    instance: ProblemInstance, algo: Algorithm = DEFAULT_ALGORITHM
) -> tuple[np.ndarray, ThresholdResult]:
    """Weighted-simplex projection returning the threshold diagnostics."""
    if instance.a <= 0:
        raise InvalidRadius(f"simplex level must be positive, got {instance.a}")
    positive = instance.w > 0
    if positive.all():
        return _dispatch(instance, algo)
    sub = ProblemInstance(instance.y[positive], instance.w[positive], instance.a)
    _, res = _dispatch(sub, algo)
    # Thresholding the full instance maps zero-weight coordinates to
    # max(y_i, 0), which is their projection onto the x >= 0 constraint.
    x = apply_threshold(instance, res.lam)
    return x, ThresholdResult(res.lam, int(np.count_nonzero(x)), res.ops_visited)


def project_simplex(
    instance: ProblemInstance, algo: Algorithm = DEFAULT_ALGORITHM
) -> np.ndarray:
    """Project ``y`` onto the weighted simplex ``{x >= 0 : sum w_i x_i = a}``."""
    x, _ = project_simplex_with_result(instance, algo)
    return x


def project_weighted_l1_ball_with_result(
    instance: ProblemInstance, algo: Algorithm = DEFAULT_ALGORITHM
) -> tuple[np.ndarray, ThresholdResult]:
    """Weighted l1-ball projection returning the threshold diagnostics.

    For points inside the ball the result has ``lam == 0`` (the constraint
    is inactive) and no solver runs; ``ops_visited`` counts the one
    membership pass.
    """
    if instance.a < 0:
        raise NegativeRadius(f"ball radius must be nonnegative, got {instance.a}")
    y, w = instance.y, instance.w
    d = instance.d
    if weighted_l1_norm(y, w) <= instance.a:
        return y.copy(), ThresholdResult(0.0, int(np.count_nonzero(y)), d)
    abs_inst = ProblemInstance(np.abs(y), w, instance.a)
    positive = w > 0
    if instance.a == 0.0:
        # Degenerate radius: constrained coordinates collapse to zero,
        # zero-weight coordinates pass through.  The effective threshold
        # is the largest constrained ratio.
        lam = float(np.max(abs_inst.y[positive] / w[positive]))
    else:
        if positive.all():
            sub = abs_inst
        else:
            sub = ProblemInstance(abs_inst.y[positive], w[positive], instance.a)
        _, res = _dispatch(sub, algo)
        lam = res.lam
    x = np.sign(y) * apply_threshold(abs_inst, lam)
    ops = d if instance.a == 0.0 else res.ops_visited + d
    return x, ThresholdResult(lam, int(np.count_nonzero(x)), ops)


def project_weighted_l1_ball(
    instance: ProblemInstance, algo: Algorithm = DEFAULT_ALGORITHM
) -> np.ndarray:
    """Project ``y`` onto the weighted l1 ball ``{x : sum w_i |x_i| <= a}``."""
    x, _ = project_weighted_l1_ball_with_result(instance, algo)
    return x
