"""Radix-bucket threshold search: linear-time projection.

The ratios ``z = y / w`` are mapped to 64-bit keys by an order-preserving
bijection on IEEE-754 doubles, then repeatedly scattered into 256 buckets
by one key byte per pass (most significant first).  Scanning buckets from
the top with carried suffix sums ``C = sum w_i y_i``, ``W = sum w_i^2``,
``N = count`` locates the bucket containing the support boundary:

* if the suffix pivot ``(C - a) / W`` of everything strictly above a
  bucket already exceeds the bucket's whole value range, the threshold is
  that pivot and the search is over;
* if the suffix pivot including the bucket reaches into the bucket's
  value range, the boundary lies inside: descend into it next pass;
* otherwise the bucket lies entirely inside the support: fold its sums
  into the carry and keep scanning downward.

Bucket value ranges are compared in key space (each pass-``k`` bucket is
a dyadic key interval), so no per-bucket minima/maxima are needed; an
ambiguous comparison just descends one extra level and exactness is
preserved.  The pass budget is the 8 key bytes; each pass visits each
active element once, so the work is at most ``8 d + 8 B`` visits.

With ``filtering`` enabled, lower bounds on the threshold are carried
between passes — the subsequence pivot of everything still alive and the
suffix pivot above the last descend bucket, seeded for large inputs by the
threshold of a small subsample (itself a subsequence pivot) — and active
elements whose ratio falls strictly below the best bound are dropped
before scattering.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field

import numpy as np

from .core import (
    ProblemInstance,
    ThresholdResult,
    apply_threshold,
    weighted_simplex_sort,
    _check_simplex_inputs,
)

B = 256
_PASSES = 8
_SMALL_CUTOFF = 64
_SIGN_BIT = np.uint64(0x8000000000000000)
_LITTLE_ENDIAN = sys.byteorder == "little"


def monotone_key(values: np.ndarray) -> np.ndarray:
    """Map float64 values to uint64 keys preserving the total order.

    Negative values have all bits flipped, nonnegative values get the
    sign bit set; ``u < v`` iff ``key(u) < key(v)`` for all doubles.
    Note -0.0 and +0.0 map to different keys; callers canonicalize.
    """
    bits = np.ascontiguousarray(values, dtype=np.float64).view(np.uint64)
    # Branch-free: XOR with all-ones for negatives, with the sign bit
    # otherwise.  In-place ops keep this to one full-size temporary.
    flip = (bits.view(np.int64) >> 63).view(np.uint64)
    np.bitwise_or(flip, _SIGN_BIT, out=flip)
    np.bitwise_xor(bits, flip, out=flip)
    return flip


def inverse_monotone_key(keys: np.ndarray) -> np.ndarray:
    """Inverse of :func:`monotone_key`."""
    k = np.ascontiguousarray(keys, dtype=np.uint64)
    bits = np.where(k >> np.uint64(63) == 1, k & ~_SIGN_BIT, ~k)
    return bits.view(np.float64)


def _key_of(value: float) -> int:
    return int(monotone_key(np.array([value], dtype=np.float64))[0])


def key_digit(keys: np.ndarray, pass_index: int) -> np.ndarray:
    """Byte ``pass_index`` of each key, most significant byte first."""
    if _LITTLE_ENDIAN and keys.flags.c_contiguous:
        # Strided byte view: no shift/mask temporaries.
        byte = keys.view(np.uint8)[_PASSES - 1 - pass_index::_PASSES]
        return byte.astype(np.int64)
    shift = np.uint64(8 * (_PASSES - 1 - pass_index))
    return ((keys >> shift) & np.uint64(0xFF)).astype(np.int64)


@dataclass(frozen=True)
class MonotoneKey:
    """A single value's order-preserving 64-bit key."""

    key: int

    @classmethod
    def from_value(cls, value: float) -> "MonotoneKey":
        return cls(_key_of(value))

    @property
    def digits(self) -> tuple[int, ...]:
        return tuple((self.key >> (8 * (7 - i))) & 0xFF for i in range(8))


def _histograms(dig: np.ndarray, wy: np.ndarray, w2: np.ndarray):
    counts = np.bincount(dig, minlength=B)
    sum_wy = np.bincount(dig, weights=wy, minlength=B)
    sum_w2 = np.bincount(dig, weights=w2, minlength=B)
    return counts, sum_wy, sum_w2


def _suffix(per_bucket: np.ndarray, carry) -> np.ndarray:
    """Suffix totals over buckets b..B-1 plus the carry; index B is carry only."""
    out = np.empty(B + 1, dtype=np.longdouble)
    out[B] = carry
    out[:B] = carry + np.cumsum(per_bucket[::-1].astype(np.longdouble))[::-1]
    return out


@dataclass
class BucketState:
    """One radix pass: bucket membership plus carried cumulative sums.

    ``buckets`` holds per-bucket index lists in ascending digit order
    (a stable partition of the active set).  ``suffix_*[b]`` is the
    carry plus the totals of buckets ``b..B-1``; ``suffix_*[B]`` is the
    carry alone, i.e. everything already committed to the support.
    """

    a: float
    keys: np.ndarray
    ratios: np.ndarray
    wy: np.ndarray
    w2: np.ndarray
    pass_index: int = -1
    buckets: list[np.ndarray] = field(default_factory=list)
    counts: np.ndarray = field(default_factory=lambda: np.zeros(B, dtype=np.intp))
    suffix_wy: np.ndarray = field(default_factory=lambda: np.zeros(B + 1, dtype=np.longdouble))
    suffix_w2: np.ndarray = field(default_factory=lambda: np.zeros(B + 1, dtype=np.longdouble))
    suffix_n: np.ndarray = field(default_factory=lambda: np.zeros(B + 1, dtype=np.int64))
    carry_wy: float = 0.0
    carry_w2: float = 0.0
    carry_n: int = 0
    active_bucket: int | None = None


def initial_bucket_state(instance: ProblemInstance) -> BucketState:
    """Set up keys/sums for a fresh instance (no pass run yet)."""
    z = instance.y / instance.w + 0.0
    return BucketState(
        a=float(instance.a),
        keys=monotone_key(z),
        ratios=z,
        wy=instance.y * instance.w,
        w2=instance.w * instance.w,
    )


def scatter_pass(state: BucketState, active: np.ndarray, digit: int) -> BucketState:
    """Scatter ``active`` indices into 256 buckets by one key byte.

    Returns a new state for pass ``digit`` carrying over the committed
    sums; bucket index lists are a stable partition of ``active`` and
    the per-bucket partial sums are accumulated in the same pass.
    """
    if not 0 <= digit < _PASSES:
        raise ValueError(f"digit index must be in [0, {_PASSES}), got {digit}")
    active = np.asarray(active, dtype=np.intp)
    dig = key_digit(state.keys[active], digit)
    counts, bwy, bw2 = _histograms(dig, state.wy[active], state.w2[active])
    order = np.argsort(dig, kind="stable")
    sorted_idx = active[order]
    starts = np.concatenate(([0], np.cumsum(counts)))
    buckets = [sorted_idx[starts[b]:starts[b + 1]] for b in range(B)]
    return BucketState(
        a=state.a,
        keys=state.keys,
        ratios=state.ratios,
        wy=state.wy,
        w2=state.w2,
        pass_index=digit,
        buckets=buckets,
        counts=counts,
        suffix_wy=_suffix(bwy, state.carry_wy),
        suffix_w2=_suffix(bw2, state.carry_w2),
        suffix_n=_suffix(counts, state.carry_n).astype(np.int64),
        carry_wy=state.carry_wy,
        carry_w2=state.carry_w2,
        carry_n=state.carry_n,
    )


def rho_suffix(state: BucketState, b: int) -> float:
    """Suffix pivot ``(C_b - a) / W_b`` for buckets ``b..B-1`` plus carry.

    Returns ``-inf`` when the suffix is empty (no constraint yet).
    """
    if state.suffix_n[b] == 0:
        return float("-inf")
    return float((state.suffix_wy[b] - state.a) / state.suffix_w2[b])


def _sorted_finish(z_a, wy_a, w2_a, carry_wy, carry_w2, carry_n, a) -> float:
    """Resolve a small active set by sorting, honoring the carried sums."""
    order = np.argsort(z_a, kind="stable")[::-1]
    z_desc = z_a[order]
    cum_wy = carry_wy + np.cumsum(wy_a[order].astype(np.longdouble))
    cum_w2 = carry_w2 + np.cumsum(w2_a[order].astype(np.longdouble))
    rho = (cum_wy - a) / cum_w2
    hit = np.flatnonzero(rho < z_desc)
    if hit.size:
        return float(rho[hit[-1]])
    # Boundary sits above every active element; only reachable with a
    # nonempty carry (with no carry the top prefix always qualifies).
    assert carry_n > 0
    return float((carry_wy - a) / carry_w2)


def project_bucket(
    instance: ProblemInstance, filtering: bool = False
) -> tuple[np.ndarray, ThresholdResult]:
    """Project onto the weighted simplex via radix bucketing.

    Matches the sort oracle's threshold.  ``ops_visited`` counts one
    visit per element entering each pass (the per-element digit test,
    bound test and scatter are one fused visit) plus 256 bucket headers
    per pass; the structure guarantees ``ops_visited <= 8 d + 2048``.
    """
    _check_simplex_inputs(instance)
    a = float(instance.a)
    ops = 0
    bound = float("-inf")  # best lower bound on the threshold (filtering)

    if filtering and instance.d >= (1 << 16):
        # Seed the running bound by solving a small subsample with the sort
        # routine: its threshold equals the subsequence pivot of the
        # subsample's support, hence never exceeds the true threshold.
        # Sampling contiguous blocks touches a few dozen cache lines
        # instead of striding across the whole input.  Working arrays are
        # then only materialized for the survivors.
        starts = np.linspace(0, instance.d - 64, 64).astype(np.intp)
        idx = (starts[:, None] + np.arange(64)).ravel()
        sample = ProblemInstance(instance.y[idx], instance.w[idx], a)
        _, sample_res = weighted_simplex_sort(sample)
        bound = sample_res.lam
        z_all = instance.y / instance.w
        kept = np.flatnonzero(z_all >= bound)
        if kept.size == 0:  # cannot happen mathematically; stay safe
            kept = np.arange(instance.d)
            bound = float("-inf")
        z_a = z_all.take(kept)
        y_k = instance.y.take(kept)
        w_k = instance.w.take(kept)
        wy_a = y_k * w_k
        w2_a = w_k * w_k
    else:
        z_a = instance.y / instance.w
        wy_a = instance.y * instance.w
        w2_a = instance.w * instance.w
    z_a += 0.0  # canonicalize -0.0 in place
    keys_a = monotone_key(z_a)

    carry_wy = np.longdouble(0.0)
    carry_w2 = np.longdouble(0.0)
    carry_n = 0
    prefix = 0  # key bits fixed by the descents so far
    lam: float | None = None
    # Elements the next pass will visit: the whole input on the first pass
    # (bound test, digit extraction and scatter count as one fused visit).
    visits_next = instance.d
    filtered_at = bound

    for pass_index in range(_PASSES):
        m_enter = visits_next
        if filtering and bound > filtered_at:
            kept = np.flatnonzero(z_a >= bound)
            if kept.size != z_a.size:
                z_a = z_a.take(kept)
                wy_a = wy_a.take(kept)
                w2_a = w2_a.take(kept)
                keys_a = keys_a.take(kept)
            filtered_at = bound
        if z_a.size < _SMALL_CUTOFF:
            ops += m_enter
            lam = _sorted_finish(z_a, wy_a, w2_a, carry_wy, carry_w2, carry_n, a)
            break
        ops += m_enter + B

        shift = 8 * (_PASSES - 1 - pass_index)
        dig = key_digit(keys_a, pass_index)
        counts, bwy, bw2 = _histograms(dig, wy_a, w2_a)
        suf_wy = _suffix(bwy, carry_wy)
        suf_w2 = _suffix(bw2, carry_w2)
        suf_n = _suffix(counts, carry_n).astype(np.int64)
        nonempty = np.flatnonzero(counts)

        if nonempty.size == 1:
            # All active elements share this byte; if they are exact ties
            # deeper passes cannot separate them, so resolve in closed form.
            vmin = float(z_a.min())
            if vmin == float(z_a.max()):
                rho_inc = float((suf_wy[0] - a) / suf_w2[0])
                if rho_inc < vmin:
                    lam = rho_inc
                else:
                    assert carry_n > 0
                    lam = float((carry_wy - a) / carry_w2)
                break

        rho_all = float((suf_wy[0] - a) / suf_w2[0])
        b_k = -1
        rho_desc = float("-inf")
        low_mask = (1 << shift) - 1
        for b in nonempty[::-1].tolist():
            if suf_n[b + 1] > 0:
                rho_above = float((suf_wy[b + 1] - a) / suf_w2[b + 1])
                hi_key = prefix | (b << shift) | low_mask
                if _key_of(rho_above) > hi_key:
                    # Threshold already determined strictly above bucket b.
                    lam = rho_above
                    break
            else:
                rho_above = float("-inf")
            rho_b = float((suf_wy[b] - a) / suf_w2[b])
            lo_key = prefix | (b << shift)
            if _key_of(rho_b) >= lo_key:
                b_k = b
                rho_desc = rho_above
                break
            # Otherwise bucket b lies entirely inside the support: its sums
            # stay in the suffix as the scan folds downward.
        if lam is not None:
            break
        if b_k < 0:
            # Every bucket folded: the whole active set is in the support.
            lam = rho_all
            break

        carry_wy = suf_wy[b_k + 1]
        carry_w2 = suf_w2[b_k + 1]
        carry_n = int(suf_n[b_k + 1])
        kept = np.flatnonzero(dig == b_k)
        z_a = z_a.take(kept)
        wy_a = wy_a.take(kept)
        w2_a = w2_a.take(kept)
        keys_a = keys_a.take(kept)
        prefix |= b_k << shift
        visits_next = z_a.size
        if filtering:
            bound = max(bound, rho_all, rho_desc)
    else:
        # All 8 bytes consumed: the remaining elements share the full key,
        # i.e. they are exactly tied.
        v0 = float(z_a[0])
        tot_wy = carry_wy + np.sum(wy_a.astype(np.longdouble))
        tot_w2 = carry_w2 + np.sum(w2_a.astype(np.longdouble))
        rho_inc = float((tot_wy - a) / tot_w2)
        if rho_inc < v0:
            lam = rho_inc
        else:
            assert carry_n > 0
            lam = float((carry_wy - a) / carry_w2)

    x = apply_threshold(instance, lam)
    return x, ThresholdResult(float(lam), int(np.count_nonzero(x)), ops)
