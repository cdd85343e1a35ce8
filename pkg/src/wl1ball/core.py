"""Core problem types and the sort-based threshold solvers.

Projecting a point ``y`` onto the weighted simplex ``{x >= 0 : sum w_i x_i = a}``
reduces to finding a single threshold ``lam`` such that

    x_i = max(y_i - w_i * lam, 0).

The routines here recover ``lam`` by sorting the ratios ``z_i = y_i / w_i``
and scanning prefix sums.  ``weighted_simplex_sort`` is the reference
implementation (the oracle): every fast algorithm in this package must
reproduce its threshold to within :data:`REL_TOL` relative error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptyInput,
    EmptySubsequence,
    InvalidRadius,
    LengthMismatch,
    NonPositiveWeight,
)

# Feasibility / cross-algorithm agreement tolerance (relative).
REL_TOL = 1e-9


def stable_sum(values: np.ndarray) -> float:
    """Sum with extended-precision accumulation.

    Accumulating in 80-bit floats keeps the absolute error near
    ``d * 1e-19 * max|value|`` even for d ~ 1e7, which is far below the
    1e-9 agreement tolerance used throughout.
    """
    return float(np.sum(np.asarray(values, dtype=np.longdouble)))


def stable_cumsum(values: np.ndarray) -> np.ndarray:
    """Cumulative sum in extended precision (returned as longdouble)."""
    return np.cumsum(np.asarray(values, dtype=np.longdouble))


@dataclass
class ProblemInstance:
    """One projection problem: point ``y``, weights ``w``, radius ``a``.

    ``y`` may have any sign.  Weights must be nonnegative and finite;
    zero-weight entries are allowed here and are handled by the public
    entry points (the solver backends require strictly positive weights).
    The sign of ``a`` is validated per operation: the simplex path needs
    ``a > 0``, the ball path needs ``a >= 0``.
    """

    y: np.ndarray
    w: np.ndarray
    a: float

    def __post_init__(self):
        self.y = np.ascontiguousarray(self.y, dtype=np.float64)
        self.w = np.ascontiguousarray(self.w, dtype=np.float64)
        self.a = float(self.a)
        if self.y.ndim != 1 or self.w.ndim != 1:
            raise LengthMismatch("y and w must be one-dimensional")
        if self.y.size != self.w.size:
            raise LengthMismatch(
                f"y has length {self.y.size}, w has length {self.w.size}"
            )
        if self.y.size == 0:
            raise EmptyInput("cannot project an empty vector")
        if not np.isfinite(self.y).all():
            raise ValueError("y contains non-finite entries")
        if not np.isfinite(self.w).all():
            raise ValueError("w contains non-finite entries")
        if (self.w < 0).any():
            raise NonPositiveWeight("weights must be nonnegative")
        if not np.isfinite(self.a):
            raise ValueError("radius must be finite")

    @property
    def d(self) -> int:
        return self.y.size


@dataclass
class RatioView:
    """Ratios ``z_i = y_i / w_i`` plus a permutation sorting them ascending."""

    z: np.ndarray
    order: np.ndarray


@dataclass
class ThresholdResult:
    """Threshold and diagnostics from one solve.

    ``lam`` is the threshold, ``support_size`` the number of strictly
    positive output entries, and ``ops_visited`` an instrumentation
    counter of element visits (algorithm-specific; see each solver).
    """

    lam: float
    support_size: int
    ops_visited: int


def ratio_view(instance: ProblemInstance) -> RatioView:
    """Build the ratio vector and its ascending sort order.

    Requires strictly positive weights.  Adding 0.0 canonicalizes any
    -0.0 ratio so that tied values share one bit pattern.
    """
    z = instance.y / instance.w + 0.0
    order = np.argsort(z, kind="stable")
    return RatioView(z=z, order=order)


def apply_threshold(instance: ProblemInstance, lam: float) -> np.ndarray:
    """Soft-threshold ``y`` against ``w * lam``: the shared final step.

    Every solver produces its output through this exact expression, so
    outputs can be compared bit-for-bit given equal thresholds.
    """
    return np.maximum(instance.y - instance.w * lam, 0.0)


def weighted_l1_norm(x: np.ndarray, w: np.ndarray) -> float:
    """Return ``sum_i w_i |x_i|`` with extended-precision accumulation."""
    x = np.asarray(x, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if x.shape != w.shape:
        raise LengthMismatch(f"x has shape {x.shape}, w has shape {w.shape}")
    return stable_sum(w * np.abs(x))


def _check_simplex_inputs(instance: ProblemInstance) -> None:
    if instance.a <= 0:
        raise InvalidRadius(f"simplex level must be positive, got {instance.a}")
    if (instance.w <= 0).any():
        raise NonPositiveWeight("simplex solvers require strictly positive weights")


def simplex_sort(instance: ProblemInstance) -> tuple[np.ndarray, ThresholdResult]:
    """Project onto the unweighted simplex by sorting (reference path).

    Expects unit weights; use :func:`weighted_simplex_sort` otherwise.
    The threshold is the largest prefix mean ``(sum of top-k - a)/k``
    that stays below the k-th largest entry.
    """
    _check_simplex_inputs(instance)
    if not np.all(instance.w == 1.0):
        raise ValueError("simplex_sort expects unit weights")
    y = instance.y
    d = y.size
    a = instance.a
    u = np.sort(y)[::-1]
    rho = (stable_cumsum(u) - a) / np.arange(1, d + 1)
    # rho[0] = u[0] - a < u[0], so at least one index qualifies.
    k = int(np.flatnonzero(rho < u)[-1])
    tau = float(rho[k])
    x = apply_threshold(instance, tau)
    return x, ThresholdResult(tau, int(np.count_nonzero(x)), d)


def weighted_simplex_sort(instance: ProblemInstance) -> tuple[np.ndarray, ThresholdResult]:
    """Project onto the weighted simplex by sorting the ratios (the oracle).

    Sorts ``z = y / w`` descending and takes the largest k for which

        rho_k = (sum of top-k w_i y_i - a) / (sum of top-k w_i^2) < z_(k);

    the threshold is that ``rho_k``.  Equality ``rho_k == z_(k)`` counts
    as "not in support" (the thresholded entry is zero either way).
    """
    _check_simplex_inputs(instance)
    y, w, a = instance.y, instance.w, instance.a
    view = ratio_view(instance)
    desc = view.order[::-1]
    z_desc = view.z[desc]
    w_desc = w[desc]
    y_desc = y[desc]
    cum_wy = stable_cumsum(w_desc * y_desc)
    cum_w2 = stable_cumsum(w_desc * w_desc)
    rho = (cum_wy - a) / cum_w2
    # rho[0] = z_(1) - a / w_(1)^2 < z_(1), so the set below is nonempty.
    k = int(np.flatnonzero(rho < z_desc)[-1])
    lam = float(rho[k])
    x = apply_threshold(instance, lam)
    return x, ThresholdResult(lam, int(np.count_nonzero(x)), instance.d)


def subsequence_pivot(instance: ProblemInstance, subset) -> float:
    """Pivot of an index subset: ``(sum_V w_i y_i - a) / (sum_V w_i^2)``.

    For any nonempty subset this value never exceeds the true threshold,
    which is what makes it usable both as a search pivot and as a
    filtering bound.
    """
    idx = np.asarray(subset, dtype=np.intp)
    if idx.size == 0:
        raise EmptySubsequence("subsequence pivot needs at least one index")
    wv = instance.w[idx]
    yv = instance.y[idx]
    num = np.sum((wv * yv).astype(np.longdouble)) - instance.a
    den = np.sum((wv * wv).astype(np.longdouble))
    return float(num / den)
