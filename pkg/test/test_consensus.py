#
# Copyright (C) 2026 osscp developers. See LICENSE file for terms.
#
"""
Unit tests for the OS-SCP consensus ADMM engine
"""

from __future__ import print_function

import unittest

import numpy as np

from osscp.consensus import AgentState, OsscpConfig, osscp_solve, dual_update, residuals, shifted_mean, \
    agent_mean, consensus_update, primal_update
from osscp.errors import ArgumentOutOfRangeError
from osscp.scp import ScpConfig, scp_solve, final_trajectory
from osscp.trajectory import Trajectory
from test.test_helpers import double_integrator, double_integrator_guess, weights, random_trajectory, lq_controls, \
    tiny_unicycle, perturbed, dense_penalized_oracle, dense_projection_oracle


def agents_from(rng, count, K=4):
    return [AgentState(i, random_trajectory(rng, K, 2, 1), random_trajectory(rng, K, 2, 1, scale=0.1))
            for i in range(count)]


class ConsensusStepTest(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.RandomState(9)

    def test_dual_update_identity(self):
        agent = agents_from(self.rng, 1)[0]
        zbar = random_trajectory(self.rng, 4, 2, 1)
        updated = dual_update(agent, zbar)
        np.testing.assert_allclose((updated.dual - agent.dual).points, (agent.trajectory - zbar).points,
                                   rtol=0.0, atol=1e-12)
        self.assertIs(updated.trajectory, agent.trajectory)

    def test_masked_dual_update(self):
        agent = agents_from(self.rng, 1)[0]
        zbar = random_trajectory(self.rng, 4, 2, 1)
        updated = dual_update(agent, zbar, mask=[True, False, True])
        np.testing.assert_array_equal(updated.dual.points[:, 1], agent.dual.points[:, 1])
        self.assertFalse(np.allclose(updated.dual.points[:, 0], agent.dual.points[:, 0]))

    def test_residuals(self):
        agents = agents_from(self.rng, 3)
        zbar_new = random_trajectory(self.rng, 4, 2, 1)
        zbar_old = random_trajectory(self.rng, 4, 2, 1)
        primal, dual = residuals(agents, zbar_new, zbar_old, 2.5)
        for a, value in zip(agents, primal):
            self.assertAlmostEqual(value, np.linalg.norm(a.trajectory.points - zbar_new.points))
        self.assertAlmostEqual(dual, 2.5 * np.linalg.norm(zbar_new.points - zbar_old.points))

    def test_shifted_mean(self):
        agents = agents_from(self.rng, 3)
        expected = np.mean([a.trajectory.points + a.dual.points for a in agents], axis=0)
        np.testing.assert_allclose(shifted_mean(agents).points, expected)
        cfg = OsscpConfig(1.0, 1e-3, 1e-3, 1e-4, 10, weights(), consensus_mask=[False, True, True])
        masked = shifted_mean(agents, cfg).points
        np.testing.assert_allclose(masked[:, 0], agent_mean(agents).points[:, 0])
        np.testing.assert_allclose(masked[:, 1:], expected[:, 1:])

    def test_consensus_is_feasible(self):
        problem = double_integrator(K=4, floor=0.0)
        agents = agents_from(self.rng, 3)
        cfg = OsscpConfig(1.0, 1e-3, 1e-3, 1e-4, 10, weights())
        zbar = consensus_update(problem, agents, cfg).points
        np.testing.assert_allclose(zbar[0, :2], [1.0, 0.0], atol=1e-6)
        for k in range(4):
            np.testing.assert_allclose(zbar[k + 1, :2], problem.dynamics(k, zbar[k])[0], atol=1e-6)
        self.assertTrue(np.all(zbar[:, 0] >= -1e-6))

    def test_primal_update_matches_dense_oracle(self):
        problem, straight = tiny_unicycle()
        cfg = OsscpConfig(3.0, 1e-3, 1e-3, 1e-4, 10, weights(ineq_penalty="positive"))
        for _ in range(3):
            agent = AgentState(0, perturbed(self.rng, straight),
                               perturbed(self.rng, Trajectory.zeros_like(straight), scale=0.05))
            zbar = perturbed(self.rng, straight)
            updated = primal_update(problem, agent, zbar, cfg)
            expected, _ = dense_penalized_oracle(problem, agent.trajectory, cfg.weights,
                                                 (zbar - agent.dual).flat(), cfg.rho)
            np.testing.assert_allclose(updated.trajectory.points, expected.points, atol=1e-3)
            self.assertIs(updated.dual, agent.dual)

    def test_three_agent_consensus_matches_dense_projection(self):
        problem, straight = tiny_unicycle()
        cfg = OsscpConfig(3.0, 1e-3, 1e-3, 1e-4, 10, weights())
        for _ in range(3):
            agents = [AgentState(i, perturbed(self.rng, straight, scale=0.2),
                                 perturbed(self.rng, Trajectory.zeros_like(straight), scale=0.05)) for i in range(3)]
            zbar = consensus_update(problem, agents, cfg)
            expected = dense_projection_oracle(problem, agent_mean(agents), shifted_mean(agents))
            np.testing.assert_allclose(zbar.points, expected.points, atol=5e-4)


class OsscpSolveTest(unittest.TestCase):
    def setUp(self):
        self.problem = double_integrator(K=4)
        self.guesses = [double_integrator_guess(self.problem, scale=0.5, seed=s) for s in range(3)]
        self.cfg = OsscpConfig(2.0, 1e-6, 1e-6, 1e-300, 500, weights(wp=1.0))

    def test_convex_consensus_matches_single_scp(self):
        result = osscp_solve(self.problem, self.guesses, self.cfg)
        self.assertTrue(result.converged)
        self.assertEqual(result.reason, "residuals")
        final = result.history[-1]
        self.assertLessEqual(max(final.primal_residuals), 1e-6)
        self.assertLessEqual(final.dual_residual, 1e-6)

        record = scp_solve(self.problem, self.guesses[0], ScpConfig(weights(wp=1.0), 1e-12, 200))
        self.assertTrue(result.zbar.allclose(final_trajectory(record), atol=1e-4))
        np.testing.assert_allclose(result.zbar.controls[:-1, 0], lq_controls(self.problem), atol=1e-4)

    def test_every_consensus_iterate_is_feasible(self):
        result = osscp_solve(self.problem, self.guesses, self.cfg._replace(j_max=6))
        self.assertEqual(len(result.history), result.iterations + 1)
        self.assertEqual(len(result.agent_history), result.iterations + 1)
        for state in result.history:
            self.assertFalse(state.projection_failed)
            points = state.zbar.points
            np.testing.assert_allclose(points[0, :2], [1.0, 0.0], atol=1e-6)
            for k in range(4):
                np.testing.assert_allclose(points[k + 1, :2], self.problem.dynamics(k, points[k])[0], atol=1e-6)

    def test_agent_permutation_invariance(self):
        cfg = self.cfg._replace(j_max=5)
        first = osscp_solve(self.problem, self.guesses, cfg)
        second = osscp_solve(self.problem, [self.guesses[2], self.guesses[0], self.guesses[1]], cfg)
        self.assertEqual(len(first.history), len(second.history))
        for a, b in zip(first.history, second.history):
            self.assertTrue(a.zbar.allclose(b.zbar, atol=1e-9))

    def test_single_agent(self):
        result = osscp_solve(self.problem, self.guesses[:1], self.cfg._replace(j_max=3))
        self.assertEqual(len(result.history[-1].primal_residuals), 1)

    def test_masked_consensus_leaves_other_duals_at_zero(self):
        cfg = self.cfg._replace(j_max=3, consensus_mask=[True, True, False])
        result = osscp_solve(self.problem, self.guesses, cfg)
        for agent in result.agent_history[-1]:
            np.testing.assert_array_equal(agent.dual.points[:, 2], 0.0)

    def test_cost_stagnation_stops_before_consensus(self):
        result = osscp_solve(self.problem, self.guesses, self.cfg._replace(eps_c=1e6))
        self.assertEqual(result.reason, "cost-stagnation")
        self.assertTrue(result.converged)
        self.assertEqual(result.iterations, 1)
        self.assertGreater(max(result.history[-1].primal_residuals), self.cfg.eps_r)

    def test_repeated_projection_failures_stop_the_run(self):
        problem = double_integrator(K=3, floor=2.0)
        guesses = [double_integrator_guess(problem, scale=0.1, seed=s) for s in range(2)]
        result = osscp_solve(problem, guesses, OsscpConfig(1.0, 1e-3, 1e-3, 1e-4, 50, weights()))
        self.assertEqual(result.reason, "projection-failed")
        self.assertFalse(result.converged)
        self.assertEqual(result.iterations, 4)
        self.assertTrue(all(state.projection_failed for state in result.history))

    def test_config_validation(self):
        for cfg in (self.cfg._replace(rho=0.0), self.cfg._replace(eps_r=-1.0), self.cfg._replace(j_max=0),
                    self.cfg._replace(max_projection_failures=0)):
            with self.assertRaises(ArgumentOutOfRangeError):
                osscp_solve(self.problem, self.guesses, cfg)
        with self.assertRaises(ArgumentOutOfRangeError):
            osscp_solve(self.problem, [], self.cfg)
        with self.assertRaises(ArgumentOutOfRangeError):
            osscp_solve(self.problem, self.guesses, self.cfg._replace(consensus_mask=[True]))

    def test_rejects_mismatched_guess(self):
        with self.assertRaises(ValueError):
            osscp_solve(self.problem, [Trajectory(np.zeros((3, 3)), 2, 1)], self.cfg)


if __name__ == '__main__':
    unittest.main()
