"""Pivot search: candidate-set operations and the full solver."""

import numpy as np
import pytest

import wl1ball as wl
from wl1ball.errors import DuplicateIndex, InvalidRadius, MissingIndex
from wl1ball.pivot import CandidateSet

from helpers import random_instance


def reference_pivot_driver(inst):
    """Phase-structured driver built on the exposed candidate-set ops.

    Slower than project_pivot but shares its update rules; returns the
    threshold, the discarded index sets per phase, and the sweep sizes of
    the removal phase.
    """
    z = inst.y / inst.w
    a = inst.a
    cset = CandidateSet.empty(inst)
    wl.pivot_update_add(cset, 0, inst)
    discarded_first, discarded_cleanup = [], []
    for n in range(1, inst.d):
        if z[n] > cset.lam:
            wn, yn = inst.w[n], inst.y[n]
            merged = (cset.sum_wy + cset._c_wy + wn * yn - a) / (
                cset.sum_w2 + cset._c_w2 + wn * wn
            )
            if (wn * yn - a) / (wn * wn) < merged:
                wl.pivot_update_add(cset, n, inst)
            else:
                cset.spilled.extend(cset.members)
                fresh = CandidateSet.empty(inst)
                fresh.spilled = cset.spilled
                cset = wl.pivot_update_add(fresh, n, inst)
        else:
            discarded_first.append(n)
    for n in cset.spilled:
        if z[n] > cset.lam:
            wl.pivot_update_add(cset, n, inst)
        else:
            discarded_cleanup.append(n)
    cset.spilled = []
    sweep_sizes = []
    while True:
        sweep_sizes.append(len(cset))
        removed = 0
        for n in list(cset.members):
            if z[n] < cset.lam:
                wl.pivot_update_remove(cset, n, inst)
                removed += 1
        if removed == 0:
            break
    return cset, discarded_first, discarded_cleanup, sweep_sizes


class TestCandidateSetOps:
    def test_add_tracks_exact_sums(self):
        rng = np.random.default_rng(1)
        inst = random_instance(rng, d=50)
        cset = CandidateSet.empty(inst)
        order = np.argsort(inst.y / inst.w)[::-1]  # ratios decreasing
        for n in order[:20]:
            before = cset.lam
            wl.pivot_update_add(cset, int(n), inst)
            expected = wl.subsequence_pivot(inst, cset.members)
            assert cset.lam == pytest.approx(expected, rel=1e-12)
            assert cset.lam >= before  # admitted above the old pivot

    def test_remove_tracks_exact_sums_and_raises_pivot(self):
        rng = np.random.default_rng(2)
        inst = random_instance(rng, d=60)
        cset = CandidateSet.empty(inst)
        for n in range(inst.d):
            if (inst.y[n] / inst.w[n]) > cset.lam:
                wl.pivot_update_add(cset, n, inst)
        z = inst.y / inst.w
        for n in list(cset.members):
            if len(cset) > 1 and z[n] < cset.lam:
                before = cset.lam
                wl.pivot_update_remove(cset, n, inst)
                assert cset.lam >= before - 1e-12 * abs(before)
                expected = wl.subsequence_pivot(inst, cset.members)
                assert cset.lam == pytest.approx(expected, rel=1e-12)

    def test_duplicate_index(self):
        inst = wl.ProblemInstance([3.0, 1.0], [1.0, 2.0], 2.0)
        cset = CandidateSet.empty(inst)
        wl.pivot_update_add(cset, 0, inst)
        with pytest.raises(DuplicateIndex):
            wl.pivot_update_add(cset, 0, inst)

    def test_missing_index(self):
        inst = wl.ProblemInstance([3.0, 1.0], [1.0, 2.0], 2.0)
        cset = CandidateSet.empty(inst)
        with pytest.raises(MissingIndex):
            wl.pivot_update_remove(cset, 1, inst)

    def test_full_support_add_reaches_threshold(self):
        inst = wl.ProblemInstance([0.3, 0.2], [1.0, 1.0], 1.0)
        _, res = wl.weighted_simplex_sort(inst)
        cset = CandidateSet.empty(inst)
        for n in np.argsort(inst.y / inst.w)[::-1]:
            wl.pivot_update_add(cset, int(n), inst)
        assert cset.lam == pytest.approx(res.lam, rel=1e-12)


class TestProjectPivot:
    def test_worked_instance(self):
        inst = wl.ProblemInstance([3.0, 1.0], [1.0, 2.0], 2.0)
        x, res = wl.project_pivot(inst)
        np.testing.assert_allclose(x, [2.0, 0.0])
        assert res.lam == pytest.approx(1.0)
        assert res.support_size == 1

    def test_worked_instance_trace(self):
        # Element 2 has ratio 0.5 below the initial pivot 1, so it is
        # filtered in the first pass and never admitted.
        inst = wl.ProblemInstance([3.0, 1.0], [1.0, 2.0], 2.0)
        cset, discarded_first, _, _ = reference_pivot_driver(inst)
        assert discarded_first == [1]
        assert cset.members == [0]
        assert cset.lam == pytest.approx(1.0)

    def test_single_element(self):
        x, res = wl.project_pivot(wl.ProblemInstance([5.0], [2.0], 2.0))
        np.testing.assert_allclose(x, [1.0])
        assert res.lam == pytest.approx(2.0)

    def test_invalid_radius(self):
        with pytest.raises(InvalidRadius):
            wl.project_pivot(wl.ProblemInstance([1.0], [1.0], 0.0))

    def test_oracle_equivalence_random(self):
        rng = np.random.default_rng(101)
        for _ in range(1000):
            inst = random_instance(rng, d=int(rng.integers(1, 300)))
            _, ref = wl.weighted_simplex_sort(inst)
            x, res = wl.project_pivot(inst)
            assert res.lam == pytest.approx(ref.lam, rel=1e-9)
            np.testing.assert_allclose(
                x, wl.apply_threshold(inst, ref.lam), rtol=0, atol=1e-9
            )

    def test_matches_reference_driver(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            inst = random_instance(rng, d=int(rng.integers(2, 120)))
            cset, *_ = reference_pivot_driver(inst)
            _, res = wl.project_pivot(inst)
            assert res.lam == pytest.approx(cset.lam, rel=1e-12)


class TestPivotInvariants:
    def test_pivot_always_lower_bound(self):
        rng = np.random.default_rng(41)
        for _ in range(50):
            inst = random_instance(rng, d=int(rng.integers(2, 150)))
            _, ref = wl.weighted_simplex_sort(inst)
            z = inst.y / inst.w
            cset = CandidateSet.empty(inst)
            for n in range(inst.d):
                if z[n] > cset.lam:
                    wl.pivot_update_add(cset, n, inst)
                assert cset.lam <= ref.lam + 1e-12 * abs(ref.lam) + 1e-15

    def test_removal_phase_contracts(self):
        rng = np.random.default_rng(43)
        for _ in range(50):
            inst = random_instance(rng, d=int(rng.integers(2, 150)))
            _, _, _, sweep_sizes = reference_pivot_driver(inst)
            # Strictly decreasing between sweeps except the final no-op one.
            for prev, cur in zip(sweep_sizes, sweep_sizes[1:]):
                assert cur < prev or cur == sweep_sizes[-1]

    def test_no_false_discards(self):
        rng = np.random.default_rng(47)
        for _ in range(50):
            inst = random_instance(rng, d=int(rng.integers(2, 150)))
            _, ref = wl.weighted_simplex_sort(inst)
            z = inst.y / inst.w
            support = set(np.flatnonzero(z > ref.lam).tolist())
            cset, d1, d2, _ = reference_pivot_driver(inst)
            assert support.isdisjoint(d1)
            assert support.isdisjoint(d2)
            assert support <= set(cset.members)

    def test_removal_loop_ends_at_oracle_support(self):
        rng = np.random.default_rng(53)
        for _ in range(30):
            inst = random_instance(rng, d=int(rng.integers(2, 120)))
            x, ref = wl.weighted_simplex_sort(inst)
            cset, *_ = reference_pivot_driver(inst)
            support = set(np.flatnonzero(x > 0).tolist())
            # Final members may additionally hold boundary elements whose
            # ratio equals the threshold exactly (output zero either way).
            assert support <= set(cset.members)
            extras = set(cset.members) - support
            z = inst.y / inst.w
            assert all(z[n] <= cset.lam for n in extras)

    def test_average_visits_linear_on_uniform(self):
        rng = np.random.default_rng(59)
        d = 1000
        ratios = []
        for _ in range(100):
            y = rng.random(d)
            w = rng.random(d) + 1e-9
            inst = wl.ProblemInstance(y, w, 4.0)
            _, res = wl.project_pivot(inst)
            ratios.append(res.ops_visited / d)
        assert np.mean(ratios) <= 10.0

    def test_worst_case_visits_quadratic_bound(self):
        # Increasing ratios force constant basis restarts.
        d = 2000
        y = np.linspace(0.1, 10.0, d)
        inst = wl.ProblemInstance(y, np.ones(d), 1.0)
        _, res = wl.project_pivot(inst)
        _, ref = wl.weighted_simplex_sort(inst)
        assert res.lam == pytest.approx(ref.lam, rel=1e-9)
        assert res.ops_visited <= 3 * d * d
