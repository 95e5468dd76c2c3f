#
# Copyright (C) 2026 osscp developers. See LICENSE file for terms.
#
"""
Unit tests for prox-linear SCP and multi-start SCP
"""

from __future__ import print_function

import unittest

import numpy as np

from osscp.errors import ArgumentOutOfRangeError, DimensionMismatchError, NonFiniteValueError
from osscp.problem import ProblemDefinition, true_penalized_cost
from osscp.scp import ScpConfig, scp_solve, multi_start, final_trajectory
from osscp.trajectory import Trajectory
from test.test_helpers import double_integrator, double_integrator_guess, weights, lq_controls


class ScpSolveTest(unittest.TestCase):
    def setUp(self):
        self.problem = double_integrator(K=6)
        self.cfg = ScpConfig(weights(wp=1.0), 1e-9, 100)

    def test_convex_problem_reaches_its_minimizer(self):
        record = scp_solve(self.problem, double_integrator_guess(self.problem, scale=0.3), self.cfg)
        self.assertTrue(record.converged)
        controls = final_trajectory(record).controls[:-1, 0]
        np.testing.assert_allclose(controls, lq_controls(self.problem), atol=1e-4)

    def test_costs_are_recomputed_and_nonincreasing(self):
        record = scp_solve(self.problem, double_integrator_guess(self.problem, scale=0.3), self.cfg)
        self.assertEqual(len(record.trajectories), record.iterations + 1)
        self.assertEqual(len(record.statuses), record.iterations)
        for z, cost in zip(record.trajectories, record.costs):
            self.assertEqual(cost, true_penalized_cost(self.problem, self.cfg.weights, z))
        self.assertEqual(record.descent_violations, ())
        self.assertTrue(np.all(np.diff(record.costs) <= 1e-6))
        self.assertEqual(record.final_cost, record.costs[-1])

    def test_iteration_cap(self):
        record = scp_solve(self.problem, double_integrator_guess(self.problem, scale=0.3),
                           self.cfg._replace(max_iters=2))
        self.assertEqual(record.iterations, 2)
        self.assertFalse(record.converged)

    def test_config_validation(self):
        guess = double_integrator_guess(self.problem)
        for cfg in (self.cfg._replace(eps_c=0.0), self.cfg._replace(max_iters=0),
                    self.cfg._replace(weights=weights(w1=0.0))):
            with self.assertRaises(ArgumentOutOfRangeError):
                scp_solve(self.problem, guess, cfg)

    def test_guess_dimensions(self):
        with self.assertRaises(DimensionMismatchError):
            scp_solve(self.problem, Trajectory(np.zeros((4, 3)), 2, 1), self.cfg)


class MultiStartTest(unittest.TestCase):
    def setUp(self):
        base = double_integrator(K=4)

        def dynamics(k, z_k):
            x_next, jac = base.dynamics(k, z_k)
            if abs(z_k[0]) > 50.0:
                x_next = x_next * np.nan
            return x_next, jac

        self.problem = ProblemDefinition(base.dims, dynamics, base.cost_terms,
                                         convex_set=lambda k: base.convex_steps[k])
        self.cfg = ScpConfig(weights(wp=1.0), 1e-8, 50)
        self.good = double_integrator_guess(base, scale=0.2)
        points = np.array(self.good.points)
        points[1:, 0] = 100.0
        self.bad = self.good.with_points(points)

    def test_failed_run_is_isolated(self):
        records = multi_start(self.problem, [self.good, self.bad, self.good], self.cfg)
        self.assertEqual(len(records), 3)
        self.assertIsNone(records[0].error)
        self.assertIsInstance(records[1].error, NonFiniteValueError)
        self.assertTrue(np.isnan(records[1].final_cost))
        self.assertEqual(records[0].final_cost, records[2].final_cost)

    def test_order_does_not_depend_on_workers(self):
        guesses = [double_integrator_guess(self.problem, scale=s, seed=i) for i, s in enumerate((0.1, 0.2, 0.3))]
        serial = multi_start(self.problem, guesses, self.cfg, max_workers=1)
        parallel = multi_start(self.problem, guesses, self.cfg, max_workers=3)
        for a, b in zip(serial, parallel):
            self.assertTrue(final_trajectory(a).allclose(final_trajectory(b), atol=0.0))

    def test_needs_a_guess(self):
        with self.assertRaises(ArgumentOutOfRangeError):
            multi_start(self.problem, [], self.cfg)


if __name__ == '__main__':
    unittest.main()
