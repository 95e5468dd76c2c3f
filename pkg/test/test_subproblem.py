#
# Copyright (C) 2026 osscp developers. See LICENSE file for terms.
#
"""
Unit tests for the convex subproblem builders and the projection onto the convexified constraint set
"""

from __future__ import print_function

import unittest

import numpy as np

from osscp.errors import ArgumentOutOfRangeError, DimensionMismatchError, ProjectionInfeasibleError
from osscp.problem import ProblemDims, ProblemDefinition, ConvexStep, linearize, penalized_linear_cost
from osscp.qp import solve_qp
from osscp.subproblem import build_scp_qp, build_consensus_qp, project_onto_Z, component_mask
from osscp.trajectory import Trajectory
from test.test_helpers import double_integrator, double_integrator_guess, weights, random_trajectory, tiny_unicycle, \
    perturbed, dense_penalized_oracle


def prox_linear_value(lin, w, z, center, proximal):
    return penalized_linear_cost(lin, w, z).value + 0.5 * float(np.sum(proximal * (z.flat() - center) ** 2))


class ProxLinearStepTest(unittest.TestCase):
    def setUp(self):
        self.K = 6
        self.problem = double_integrator(K=self.K, floor=-0.2)
        self.rng = np.random.RandomState(7)
        self.w = weights(wp=10.0)

    def test_slack_layout(self):
        lin = linearize(self.problem, double_integrator_guess(self.problem))
        qp = build_scp_qp(lin, self.w, lin.reference)
        self.assertEqual(qp.layout.n_slack, 2 * self.K + (self.K + 1))
        n_s = qp.layout.n_slack
        self.assertEqual(qp.ineq_matrix.shape[0], 2 * n_s)
        positive = build_scp_qp(lin, weights(ineq_penalty="positive"), lin.reference)
        self.assertEqual(positive.ineq_matrix.shape[0], 2 * n_s - (self.K + 1))

    def test_zero_weight_drops_slacks(self):
        lin = linearize(self.problem, double_integrator_guess(self.problem))
        qp = build_scp_qp(lin, weights(w2=0.0), lin.reference)
        self.assertEqual(qp.layout.n_slack, 2 * self.K)

    def test_objective_is_prox_linear_cost(self):
        for seed in range(3):
            ref = double_integrator_guess(self.problem, scale=0.3, seed=seed)
            lin = linearize(self.problem, ref)
            solution = solve_qp(build_scp_qp(lin, self.w, ref))
            self.assertEqual(solution.status, "solved")
            N = (self.K + 1) * 3
            expected = prox_linear_value(lin, self.w, solution.trajectory, ref.flat(), np.full(N, self.w.wp))
            self.assertAlmostEqual(solution.objective, expected, delta=1e-5 * max(1.0, abs(expected)))

    def test_minimizer_beats_perturbations(self):
        ref = double_integrator_guess(self.problem, scale=0.3, seed=1)
        lin = linearize(self.problem, ref)
        solution = solve_qp(build_scp_qp(lin, self.w, ref))
        z = solution.trajectory
        N = (self.K + 1) * 3
        proximal = np.full(N, self.w.wp)
        best = prox_linear_value(lin, self.w, z, ref.flat(), proximal)
        for _ in range(30):
            noise = 0.05 * self.rng.randn(self.K + 1, 3)
            noise[0, :2] = 0.0
            noise[-1, 2] = 0.0
            moved = z.with_points(z.points + noise)
            self.assertGreaterEqual(prox_linear_value(lin, self.w, moved, ref.flat(), proximal), best - 1e-6)

    def test_initial_state_is_fixed(self):
        ref = double_integrator_guess(self.problem, scale=0.3, seed=2)
        points = np.array(ref.points)
        points[0, :2] = [0.5, 0.5]
        lin = linearize(self.problem, ref.with_points(points))
        solution = solve_qp(build_scp_qp(lin, self.w, lin.reference))
        np.testing.assert_allclose(solution.trajectory.points[0, :2], [1.0, 0.0], atol=1e-6)
        self.assertEqual(solution.trajectory.points[-1, 2], 0.0)

    def test_exact_penalty_removes_dynamics_defects(self):
        ref = double_integrator_guess(self.problem, scale=0.3, seed=3)
        lin = linearize(self.problem, ref)
        points = solve_qp(build_scp_qp(lin, weights(ineq_penalty="positive"), ref)).trajectory.points
        defects = [points[k + 1, :2] - self.problem.dynamics(k, points[k])[0] for k in range(self.K)]
        self.assertLess(np.max(np.abs(defects)), 1e-6)


class ConsensusStepTest(unittest.TestCase):
    def setUp(self):
        self.problem = double_integrator(K=5)
        rng = np.random.RandomState(2)
        self.ref = double_integrator_guess(self.problem, scale=0.2)
        self.zbar = random_trajectory(rng, 5, 2, 1, scale=0.3)
        self.dual = random_trajectory(rng, 5, 2, 1, scale=0.1)
        self.lin = linearize(self.problem, self.ref)

    def test_full_consensus_is_a_prox_step_about_shifted_center(self):
        w = weights(wp=10.0)
        consensus = build_consensus_qp(self.lin, 4.0, self.zbar, self.dual, w)
        prox = build_scp_qp(self.lin, w._replace(wp=4.0), self.zbar - self.dual)
        np.testing.assert_allclose(consensus.linear, prox.linear)
        np.testing.assert_allclose(consensus.hessian.toarray(), prox.hessian.toarray())
        self.assertAlmostEqual(consensus.offset, prox.offset)

    def test_masked_components_keep_own_proximal_weight(self):
        qp = build_consensus_qp(self.lin, 4.0, self.zbar, self.dual, weights(wp=10.0), mask=[True, False, False])
        diagonal = qp.hessian.diagonal()
        # z_0 = (position, velocity, acceleration); the running cost adds 2 on the acceleration
        np.testing.assert_allclose(diagonal[:3], [4.0, 10.0, 12.0])

    def test_rejects_nonpositive_rho(self):
        with self.assertRaises(ArgumentOutOfRangeError):
            build_consensus_qp(self.lin, 0.0, self.zbar, self.dual, weights())

    def test_mask_size(self):
        with self.assertRaises(DimensionMismatchError):
            component_mask(self.problem.dims, [True, False])
        self.assertEqual(component_mask(self.problem.dims).sum(), 18)


class ProjectionTest(unittest.TestCase):
    def setUp(self):
        self.problem = double_integrator(K=5, floor=0.2)
        self.lin = linearize(self.problem, double_integrator_guess(self.problem))
        self.rng = np.random.RandomState(4)

    def test_feasible_point_is_fixed(self):
        z = double_integrator_guess(self.problem)
        self.assertTrue(project_onto_Z(self.lin, z).allclose(z, atol=1e-6))

    def test_idempotent_and_nonexpansive(self):
        for _ in range(100):
            a = random_trajectory(self.rng, 5, 2, 1)
            b = random_trajectory(self.rng, 5, 2, 1)
            pa = project_onto_Z(self.lin, a)
            pb = project_onto_Z(self.lin, b)
            self.assertTrue(project_onto_Z(self.lin, pa).allclose(pa, atol=1e-6))
            self.assertLessEqual(pa.distance(pb), a.distance(b) + 1e-6)

    def test_projection_is_feasible(self):
        p = project_onto_Z(self.lin, random_trajectory(self.rng, 5, 2, 1, scale=2.0))
        points = p.points
        np.testing.assert_allclose(points[0, :2], [1.0, 0.0], atol=1e-6)
        for k in range(5):
            np.testing.assert_allclose(points[k + 1, :2], self.problem.dynamics(k, points[k])[0], atol=1e-6)
        self.assertTrue(np.all(points[:, 0] >= 0.2 - 1e-6))

    def test_half_space_closed_form(self):
        # x_0 = 0 is fixed and x_1 = x_0 + u_0, so the set is {(0, s, s, 0) : s <= cap}
        cap = 0.3
        problem = ProblemDefinition(ProblemDims(1, 1, 1, 1, 0),
                                    lambda k, z_k: (z_k[:1] + z_k[1:], np.array([[1.0, 1.0]])), [],
                                    convex_set=lambda k: ConvexStep(-np.inf, np.inf, [[1.0, 0.0]], [0.0])
                                    if k == 0 else ConvexStep(-np.inf, np.inf),
                                    ineq=lambda z_k: (z_k[:1] - cap, np.array([[1.0, 0.0]])))
        lin = linearize(problem, Trajectory(np.zeros((2, 2)), 1, 1))
        for _ in range(20):
            v = self.rng.randn(4)
            v[3] = 0.0
            s = min(0.5 * (v[1] + v[2]), cap)
            projected = project_onto_Z(lin, Trajectory.from_flat(v, 1, 1))
            np.testing.assert_allclose(projected.flat(), [0.0, s, s, 0.0], atol=1e-6)

    def test_empty_set(self):
        problem = double_integrator(K=3, floor=2.0)
        lin = linearize(problem, double_integrator_guess(problem))
        with self.assertRaises(ProjectionInfeasibleError):
            project_onto_Z(lin, lin.reference)


class DenseOracleTest(unittest.TestCase):
    """Sparse subproblem assembly against a dense model built straight from the problem callbacks."""

    def setUp(self):
        self.problem, self.straight = tiny_unicycle()
        self.rng = np.random.RandomState(12)

    def assert_matches_oracle(self, solution, oracle):
        trajectory, value = oracle
        self.assertEqual(solution.status, "solved")
        self.assertAlmostEqual(solution.objective, value, delta=1e-6 * max(1.0, abs(value)))
        np.testing.assert_allclose(solution.trajectory.points, trajectory.points, atol=1e-3)

    def test_scp_step_matches_dense_oracle(self):
        for penalty in ("abs", "positive"):
            w = weights(wp=10.0, ineq_penalty=penalty)
            for _ in range(3):
                ref = perturbed(self.rng, self.straight)
                lin = linearize(self.problem, ref)
                solution = solve_qp(build_scp_qp(lin, w, ref))
                self.assert_matches_oracle(solution, dense_penalized_oracle(self.problem, ref, w, ref.flat(), w.wp))

    def test_consensus_step_matches_dense_oracle(self):
        w = weights(wp=10.0, ineq_penalty="positive")
        for _ in range(3):
            ref = perturbed(self.rng, self.straight)
            zbar = perturbed(self.rng, self.straight)
            dual = perturbed(self.rng, Trajectory.zeros_like(self.straight), scale=0.05)
            lin = linearize(self.problem, ref)
            solution = solve_qp(build_consensus_qp(lin, 3.0, zbar, dual, w))
            oracle = dense_penalized_oracle(self.problem, ref, w, (zbar - dual).flat(), 3.0)
            self.assert_matches_oracle(solution, oracle)


if __name__ == '__main__':
    unittest.main()
