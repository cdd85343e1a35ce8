"""Recovery solver: weights, inner solve, full schedule."""

import numpy as np
import pytest

import wl1ball as wl
from wl1ball.bench import plant_recovery_instance
from wl1ball.errors import DimensionMismatch, InvalidEpsilon, InvalidP
from wl1ball.sirl1 import SPARSITY_THRESHOLD, estimate_squared_norm


class TestWeights:
    def test_p_one_gives_unit_weights(self):
        x = np.array([0.0, 0.5, -3.0])
        np.testing.assert_array_equal(wl.irl1_weights(x, 1.0, 0.01), np.ones(3))

    def test_zero_entry_value(self):
        assert wl.irl1_weights(np.array([0.0]), 0.5, 0.01)[0] == pytest.approx(5.0)

    def test_monotone_in_magnitude(self):
        x = np.array([0.0, 0.1, 0.5, 1.0, 4.0])
        w = wl.irl1_weights(x, 0.3, 0.01)
        assert np.all(np.diff(w) < 0)
        assert np.all(w > 0)

    def test_invalid_p(self):
        with pytest.raises(InvalidP):
            wl.irl1_weights(np.zeros(2), 0.0, 0.01)
        with pytest.raises(InvalidP):
            wl.irl1_weights(np.zeros(2), 1.5, 0.01)

    def test_invalid_epsilon(self):
        with pytest.raises(InvalidEpsilon):
            wl.irl1_weights(np.zeros(2), 0.5, 0.0)

    def test_schedule(self):
        np.testing.assert_allclose(wl.make_p_schedule(3), [1.0, 0.55, 0.1])
        np.testing.assert_array_equal(wl.make_p_schedule(1), [1.0])
        with pytest.raises(InvalidP):
            wl.make_p_schedule(0)


class TestRecoveryProblem:
    def test_shape_validation(self):
        with pytest.raises(DimensionMismatch):
            wl.RecoveryProblem(np.ones((3, 4)), np.ones(5), 1.0)

    def test_schedule_validation(self):
        A, b = np.ones((2, 3)), np.ones(2)
        with pytest.raises(InvalidP):
            wl.RecoveryProblem(A, b, 1.0, p_schedule=[0.5, 0.1])
        with pytest.raises(InvalidP):
            wl.RecoveryProblem(A, b, 1.0, p_schedule=[1.0, 1.0])

    def test_lipschitz_estimate_brackets_exact(self):
        # Must not fall below the true value (step-size safety) and should
        # stay within the 1% pad plus a small iteration error.
        rng = np.random.default_rng(3)
        A = rng.standard_normal((40, 80)) / np.sqrt(40)
        exact = float(np.linalg.norm(A, 2) ** 2)
        est = estimate_squared_norm(A)
        assert exact <= est <= 1.02 * exact


class TestSolveInner:
    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(5)
        A = rng.standard_normal((6, 9))
        b = rng.standard_normal(6)
        x = rng.standard_normal(9)
        grad = A.T @ (A @ x - b)
        h = 1e-6
        for i in range(9):
            e = np.zeros(9)
            e[i] = h
            f_plus = 0.5 * np.linalg.norm(A @ (x + e) - b) ** 2
            f_minus = 0.5 * np.linalg.norm(A @ (x - e) - b) ** 2
            fd = (f_plus - f_minus) / (2 * h)
            assert grad[i] == pytest.approx(fd, rel=1e-5, abs=1e-8)

    def test_fixed_point_inside_ball(self):
        rng = np.random.default_rng(7)
        A = rng.standard_normal((10, 20)) / np.sqrt(10)
        x0 = np.zeros(20)
        x0[3] = 0.5
        b = A @ x0
        prob = wl.RecoveryProblem(A, b, 2.0)
        inner = wl.solve_inner(prob, x0, np.ones(20))
        np.testing.assert_allclose(inner.x, x0, atol=1e-12)
        assert inner.converged

    def test_huge_radius_converges_to_least_squares(self):
        rng = np.random.default_rng(11)
        A = rng.standard_normal((30, 10))
        b = rng.standard_normal(30)
        prob = wl.RecoveryProblem(A, b, 1e6, max_iter=20000)
        inner = wl.solve_inner(prob, np.zeros(10), np.ones(10))
        x_ls = np.linalg.lstsq(A, b, rcond=None)[0]
        np.testing.assert_allclose(inner.x, x_ls, atol=1e-5)

    def test_residual_monotone(self):
        rng = np.random.default_rng(13)
        for seed in range(5):
            A, b, _, x0 = plant_recovery_instance(40, 100, 4, seed)
            prob = wl.RecoveryProblem(A, b, 4.0, max_iter=2000)
            inner = wl.solve_inner(prob, x0, np.ones(100))
            assert np.all(np.diff(inner.residuals) <= 1e-7)

    def test_every_iterate_feasible(self):
        # Iterates are projection outputs; walk the same dynamics and
        # check feasibility at each step.
        rng = np.random.default_rng(17)
        A, b, _, x0 = plant_recovery_instance(30, 80, 3, 0)
        prob = wl.RecoveryProblem(A, b, 3.0)
        w = wl.irl1_weights(np.zeros(80), 0.55, 0.01) / 0.55
        L = prob.lipschitz()
        x = wl.project_weighted_l1_ball(wl.ProblemInstance(x0, w, 3.0))
        for _ in range(50):
            assert wl.weighted_l1_norm(x, w) <= 3.0 * (1 + 1e-9)
            g = A.T @ (A @ x - b)
            x = wl.project_weighted_l1_ball(wl.ProblemInstance(x - g / L, w, 3.0))
        inner = wl.solve_inner(prob, x0, w)
        assert wl.weighted_l1_norm(inner.x, w) <= 3.0 * (1 + 1e-9)

    def test_x0_shape_checked(self):
        prob = wl.RecoveryProblem(np.ones((2, 3)), np.ones(2), 1.0)
        with pytest.raises(DimensionMismatch):
            wl.solve_inner(prob, np.ones(4), np.ones(3))


class TestSirl1:
    def test_table_pattern_k5(self):
        hits = 0
        for seed in range(3):
            A, b, x_true, x0 = plant_recovery_instance(100, 256, 5, seed)
            prob = wl.RecoveryProblem(A, b, 5.0, p_schedule=wl.make_p_schedule(3))
            rep = wl.sirl1(prob, x0, x_true=x_true)
            if rep.l0 == 5 and rep.rec <= 1e-2:
                hits += 1
        assert hits == 3

    def test_schedule_length_one_is_single_lasso_solve(self):
        A, b, x_true, x0 = plant_recovery_instance(100, 256, 5, 1)
        prob = wl.RecoveryProblem(A, b, 5.0, p_schedule=wl.make_p_schedule(1))
        rep = wl.sirl1(prob, x0, x_true=x_true)
        # constraint active at the solution: l1 saturates the radius
        assert rep.l1 == pytest.approx(5.0, rel=0.05)
        assert rep.rec <= 1e-2

    def test_l0_stable_between_num_p_3_and_5(self):
        A, b, x_true, x0 = plant_recovery_instance(100, 256, 15, 0)
        reps = []
        for num_p in (3, 5):
            prob = wl.RecoveryProblem(A, b, 15.0, p_schedule=wl.make_p_schedule(num_p))
            reps.append(wl.sirl1(prob, x0, x_true=x_true))
        assert reps[0].l0 == reps[1].l0
        assert reps[1].l0 == 15
        assert reps[1].rec <= 1e-2

    def test_report_metrics_consistent(self):
        A, b, x_true, x0 = plant_recovery_instance(50, 128, 3, 2)
        prob = wl.RecoveryProblem(A, b, 3.0)
        rep = wl.sirl1(prob, x0, x_true=x_true)
        assert rep.l0 == np.count_nonzero(np.abs(rep.x_hat) > SPARSITY_THRESHOLD)
        assert rep.l1 == pytest.approx(np.sum(np.abs(rep.x_hat)))
        assert rep.l0 <= 128
        assert rep.rec >= 0
        assert rep.iters > 0
        assert rep.time_s > 0

    def test_residual_fallback_without_truth(self):
        A, b, _, x0 = plant_recovery_instance(50, 128, 3, 2)
        prob = wl.RecoveryProblem(A, b, 3.0)
        rep = wl.sirl1(prob, x0)
        assert rep.rec == pytest.approx(
            float(np.linalg.norm(A @ rep.x_hat - b)), rel=1e-12
        )
