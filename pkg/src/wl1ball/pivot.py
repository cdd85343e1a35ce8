"""Pivot-driven threshold search with online filtering.

The solver keeps a candidate support set whose subsequence pivot (a lower
bound on the true threshold) only ever increases.  Elements whose ratio
``z = y / w`` falls below the current pivot are provably outside the
support and are discarded the moment they are seen.  Three phases:

1. one pass over the input, admitting elements above the pivot and
   restarting the pivot basis whenever a single element defines a better
   bound on its own (the displaced basis is spilled for later);
2. a cleanup pass re-admitting spilled elements still above the pivot;
3. removal sweeps over the candidates, dropping ratios below the pivot,
   until a sweep removes nothing.  The surviving set is the support and
   the pivot equals the threshold.

Worst case (adversarially increasing ratios) is quadratic; on random
inputs the candidate set stays small and the work is close to one pass.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import ProblemInstance, ThresholdResult, apply_threshold, _check_simplex_inputs
from .errors import DuplicateIndex, MissingIndex

_CHUNK = 1 << 15


def _neumaier(s: float, c: float, v: float) -> tuple[float, float]:
    """One compensated accumulation step: returns (new_sum, new_compensation)."""
    t = s + v
    if abs(s) >= abs(v):
        c += (s - t) + v
    else:
        c += (v - t) + s
    return t, c


@dataclass
class CandidateSet:
    """Candidate support indices with running sums and the pivot they induce.

    The pivot ``lam`` always equals ``(sum_wy - a) / sum_w2`` over the
    current members (``-inf`` while empty).  Membership updates are O(1)
    via swap-removal; sums are compensated so long add/remove sequences
    do not drift.
    """

    a: float
    members: list[int] = field(default_factory=list)
    spilled: list[int] = field(default_factory=list)
    sum_wy: float = 0.0
    sum_w2: float = 0.0
    lam: float = float("-inf")
    _pos: dict[int, int] = field(default_factory=dict)
    _c_wy: float = 0.0
    _c_w2: float = 0.0

    @classmethod
    def empty(cls, instance: ProblemInstance) -> "CandidateSet":
        return cls(a=float(instance.a))

    def __contains__(self, index: int) -> bool:
        return index in self._pos

    def __len__(self) -> int:
        return len(self.members)


def pivot_update_add(cset: CandidateSet, index: int, instance: ProblemInstance) -> CandidateSet:
    """Admit ``index`` into the candidate set and refresh the pivot in O(1).

    Caller contract: the element's ratio strictly exceeds the current
    pivot (so the pivot never decreases across admissions).
    """
    if index in cset._pos:
        raise DuplicateIndex(f"index {index} already in candidate set")
    wyn = float(instance.w[index]) * float(instance.y[index])
    w2n = float(instance.w[index]) ** 2
    cset._pos[index] = len(cset.members)
    cset.members.append(index)
    cset.sum_wy, cset._c_wy = _neumaier(cset.sum_wy, cset._c_wy, wyn)
    cset.sum_w2, cset._c_w2 = _neumaier(cset.sum_w2, cset._c_w2, w2n)
    cset.lam = (cset.sum_wy + cset._c_wy - cset.a) / (cset.sum_w2 + cset._c_w2)
    return cset


def pivot_update_remove(cset: CandidateSet, index: int, instance: ProblemInstance) -> CandidateSet:
    """Remove ``index`` from the candidate set and refresh the pivot in O(1).

    Caller contract: the element's ratio is strictly below the current
    pivot (removing below-mean mass raises the pivot).
    """
    pos = cset._pos.pop(index, None)
    if pos is None:
        raise MissingIndex(f"index {index} not in candidate set")
    last = cset.members.pop()
    if last != index:
        cset.members[pos] = last
        cset._pos[last] = pos
    wyn = float(instance.w[index]) * float(instance.y[index])
    w2n = float(instance.w[index]) ** 2
    cset.sum_wy, cset._c_wy = _neumaier(cset.sum_wy, cset._c_wy, -wyn)
    cset.sum_w2, cset._c_w2 = _neumaier(cset.sum_w2, cset._c_w2, -w2n)
    if cset.members:
        cset.lam = (cset.sum_wy + cset._c_wy - cset.a) / (cset.sum_w2 + cset._c_w2)
    else:
        cset.sum_wy = cset.sum_w2 = cset._c_wy = cset._c_w2 = 0.0
        cset.lam = float("-inf")
    return cset


def project_pivot(instance: ProblemInstance) -> tuple[np.ndarray, ThresholdResult]:
    """Project onto the weighted simplex via the pivot search.

    Matches the sort oracle's threshold; ``ops_visited`` counts element
    visits (one per element in the first pass, one per spilled element
    in the cleanup pass, one per membership check in removal sweeps).
    """
    _check_simplex_inputs(instance)
    y, w = instance.y, instance.w
    a = float(instance.a)
    d = y.size
    z = y / w + 0.0
    wy = y * w
    w2 = w * w
    ops = d

    # Phase 1: single pass with incremental pivot updates and basis restarts.
    members = [0]
    spilled: list[int] = []
    s_wy = float(wy[0])
    c_wy = 0.0
    s_w2 = float(w2[0])
    c_w2 = 0.0
    lam = (s_wy - a) / s_w2
    for start in range(1, d, _CHUNK):
        z_c = z[start:start + _CHUNK].tolist()
        wy_c = wy[start:start + _CHUNK].tolist()
        w2_c = w2[start:start + _CHUNK].tolist()
        for off in range(len(z_c)):
            if z_c[off] > lam:
                wyn = wy_c[off]
                w2n = w2_c[off]
                merged = (s_wy + c_wy + wyn - a) / (s_w2 + c_w2 + w2n)
                if (wyn - a) / w2n < merged:
                    members.append(start + off)
                    t = s_wy + wyn
                    if abs(s_wy) >= abs(wyn):
                        c_wy += (s_wy - t) + wyn
                    else:
                        c_wy += (wyn - t) + s_wy
                    s_wy = t
                    t = s_w2 + w2n
                    if abs(s_w2) >= abs(w2n):
                        c_w2 += (s_w2 - t) + w2n
                    else:
                        c_w2 += (w2n - t) + s_w2
                    s_w2 = t
                    lam = merged
                else:
                    # The element alone bounds the threshold better than the
                    # merged basis: restart with it, keep the old basis aside.
                    spilled.extend(members)
                    members = [start + off]
                    s_wy = wyn
                    c_wy = 0.0
                    s_w2 = w2n
                    c_w2 = 0.0
                    lam = (wyn - a) / w2n

    # Phase 2: re-admit spilled elements still above the pivot.
    if spilled:
        ops += len(spilled)
        z_s = z[spilled].tolist()
        wy_s = wy[spilled].tolist()
        w2_s = w2[spilled].tolist()
        for j, n in enumerate(spilled):
            if z_s[j] > lam:
                members.append(n)
                s_wy, c_wy = _neumaier(s_wy, c_wy, wy_s[j])
                s_w2, c_w2 = _neumaier(s_w2, c_w2, w2_s[j])
                lam = (s_wy + c_wy - a) / (s_w2 + c_w2)

    # Phase 3: removal sweeps.  Rebuild the sums once from scratch to cap
    # any rounding drift accumulated during the streaming phases.
    idx = np.asarray(members, dtype=np.intp)
    tot_wy = np.sum(wy[idx].astype(np.longdouble))
    tot_w2 = np.sum(w2[idx].astype(np.longdouble))
    s_wy = float(tot_wy)
    c_wy = float(tot_wy - np.longdouble(s_wy))
    s_w2 = float(tot_w2)
    c_w2 = float(tot_w2 - np.longdouble(s_w2))
    lam = (s_wy + c_wy - a) / (s_w2 + c_w2)
    z_v = z[idx].tolist()
    wy_v = wy[idx].tolist()
    w2_v = w2[idx].tolist()
    changed = True
    while changed:
        changed = False
        i = 0
        mlen = len(members)
        checks = 0
        while i < mlen:
            checks += 1
            if z_v[i] < lam:
                wyn = wy_v[i]
                w2n = w2_v[i]
                mlen -= 1
                members[i] = members[mlen]
                z_v[i] = z_v[mlen]
                wy_v[i] = wy_v[mlen]
                w2_v[i] = w2_v[mlen]
                members.pop()
                z_v.pop()
                wy_v.pop()
                w2_v.pop()
                s_wy, c_wy = _neumaier(s_wy, c_wy, -wyn)
                s_w2, c_w2 = _neumaier(s_w2, c_w2, -w2n)
                lam = (s_wy + c_wy - a) / (s_w2 + c_w2)
                changed = True
            else:
                i += 1
        ops += checks

    # Unreachable for a > 0: the last member's ratio always exceeds the
    # pivot of its own singleton basis.
    assert members, "candidate set cannot empty out"
    x = apply_threshold(instance, lam)
    return x, ThresholdResult(float(lam), int(np.count_nonzero(x)), ops)
