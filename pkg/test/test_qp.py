#
# Copyright (C) 2026 osscp developers. See LICENSE file for terms.
#
"""
Unit tests for the operator splitting QP solver, checked against closed form and brute-force minimizers
"""

from __future__ import print_function

import unittest

import numpy as np
import scipy.sparse as sp

from osscp.constants import status_num, status_tag
from osscp.errors import ArgumentOutOfRangeError, DimensionMismatchError, UnknownConstantError
from osscp.qp import QuadraticProgram, solve_qp, stack_constraints, qp_objective
from test.test_helpers import random_spd, equality_kkt_oracle, box_clamp_oracle, active_set_oracle


class OracleEquivalenceTest(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.RandomState(11)

    def test_equality_constrained_closed_form(self):
        for _ in range(50):
            n = self.rng.randint(2, 7)
            m = self.rng.randint(1, n)
            P = random_spd(self.rng, n)
            q = self.rng.randn(n)
            A = self.rng.randn(m, n)
            b = self.rng.randn(m)
            solution = solve_qp(QuadraticProgram(P, q, A, b))
            self.assertEqual(solution.status, "solved")
            np.testing.assert_allclose(solution.x, equality_kkt_oracle(P, q, A, b), atol=1e-6)

    def test_box_clamp_closed_form(self):
        for _ in range(50):
            n = self.rng.randint(1, 8)
            d = self.rng.uniform(0.5, 3.0, n)
            q = 3.0 * self.rng.randn(n)
            lower = -self.rng.uniform(0.0, 1.0, n)
            upper = self.rng.uniform(0.0, 1.0, n)
            solution = solve_qp(QuadraticProgram(np.diag(d), q, lower=lower, upper=upper))
            self.assertEqual(solution.status, "solved")
            np.testing.assert_allclose(solution.x, box_clamp_oracle(d, q, lower, upper), atol=1e-6)

    def test_active_set_enumeration(self):
        for _ in range(50):
            n = self.rng.randint(2, 7)
            P = random_spd(self.rng, n)
            q = 2.0 * self.rng.randn(n)
            G = self.rng.randn(4, n)
            interior = self.rng.randn(n)
            h = G.dot(interior) + self.rng.uniform(0.1, 1.0, 4)
            A = self.rng.randn(1, n)
            b = A.dot(interior)
            expected = active_set_oracle(P, q, G, h, A, b)
            solution = solve_qp(QuadraticProgram(P, q, A, b, G, h))
            self.assertEqual(solution.status, "solved")
            np.testing.assert_allclose(solution.x, expected, atol=1e-6)

    def test_reported_residuals_within_tolerance(self):
        P = random_spd(self.rng, 4)
        q = self.rng.randn(4)
        G = self.rng.randn(3, 4)
        h = np.abs(self.rng.randn(3))
        solution = solve_qp(QuadraticProgram(P, q, ineq_matrix=G, ineq_upper=h), tol=1e-8)
        self.assertEqual(solution.status, "solved")
        self.assertLessEqual(max(solution.primal_residual, solution.dual_residual,
                                 solution.complementarity_residual), 1e-8)

    def test_objective_includes_offset(self):
        P = np.eye(2)
        q = np.array([1.0, -2.0])
        solution = solve_qp(QuadraticProgram(P, q, offset=4.0))
        np.testing.assert_allclose(solution.x, [-1.0, 2.0], atol=1e-7)
        self.assertAlmostEqual(solution.objective, 4.0 - 2.5, places=7)
        self.assertAlmostEqual(qp_objective(QuadraticProgram(P, q, offset=4.0), np.zeros(2)), 4.0)


class StatusTest(unittest.TestCase):
    def test_crossed_bounds_are_infeasible(self):
        solution = solve_qp(QuadraticProgram(np.eye(2), np.zeros(2), lower=[0.0, 1.0], upper=[1.0, 0.0]))
        self.assertEqual(solution.status, "infeasible")
        self.assertIsNone(solution.trajectory)

    def test_infeasibility_certificate(self):
        # x >= 0 and x <= -1
        solution = solve_qp(QuadraticProgram(np.eye(1), np.zeros(1), ineq_matrix=[[1.0]], ineq_upper=[-1.0],
                                             lower=[0.0], upper=[np.inf]))
        self.assertEqual(solution.status, "infeasible")

    def test_unbounded_certificate(self):
        solution = solve_qp(QuadraticProgram(sp.csc_matrix((2, 2)), np.array([-1.0, 0.0]), lower=[-np.inf, 0.0],
                                             upper=[np.inf, 1.0]))
        self.assertEqual(solution.status, "unbounded")

    def test_iteration_cap(self):
        solution = solve_qp(QuadraticProgram(np.eye(2), np.array([-100.0, 50.0]), lower=[0.0, 0.0],
                                             upper=[1.0, 1.0]), max_iter=1)
        self.assertEqual(solution.status, "max-iters")
        self.assertEqual(solution.iterations, 1)

    def test_status_codes(self):
        solved = solve_qp(QuadraticProgram(np.eye(2), np.ones(2)))
        self.assertEqual(solved.status_code, status_num("solved"))
        infeasible = solve_qp(QuadraticProgram(np.eye(2), np.zeros(2), lower=[0.0, 1.0], upper=[1.0, 0.0]))
        self.assertEqual(status_tag(infeasible.status_code), "infeasible")
        for tag in ("solved", "max-iters", "infeasible", "unbounded"):
            self.assertEqual(status_tag(status_num(tag)), tag)
        with self.assertRaises(UnknownConstantError):
            status_num("optimal")
        with self.assertRaises(UnknownConstantError):
            status_tag(7)

    def test_deterministic(self):
        rng = np.random.RandomState(5)
        P = random_spd(rng, 5)
        q = rng.randn(5)
        G = rng.randn(3, 5)
        h = np.abs(rng.randn(3))
        first = solve_qp(QuadraticProgram(P, q, ineq_matrix=G, ineq_upper=h))
        second = solve_qp(QuadraticProgram(P, q, ineq_matrix=G, ineq_upper=h))
        np.testing.assert_array_equal(first.x, second.x)
        self.assertEqual(first.iterations, second.iterations)


class WarmStartTest(unittest.TestCase):
    def setUp(self):
        rng = np.random.RandomState(8)
        P = random_spd(rng, 6)
        q = rng.randn(6)
        G = rng.randn(4, 6)
        A = rng.randn(2, 6)
        # x0 is strictly feasible
        x0 = 0.01 * rng.randn(6)
        h = G.dot(x0) + 0.1 * np.abs(rng.randn(4))
        self.qp = QuadraticProgram(P, q, A, A.dot(x0), G, h, lower=np.full(6, -1.0), upper=np.full(6, 1.0))

    def test_warm_start_from_a_solution(self):
        cold = solve_qp(self.qp)
        warm = solve_qp(self.qp, warm_start=cold)
        self.assertEqual(warm.status, "solved")
        np.testing.assert_allclose(warm.x, cold.x, atol=1e-6)
        self.assertLessEqual(warm.iterations, cold.iterations)

    def test_misshapen_warm_start_is_ignored(self):
        cold = solve_qp(self.qp)
        ignored = solve_qp(self.qp, warm_start=(np.ones(7), np.ones(3)))
        np.testing.assert_array_equal(ignored.x, cold.x)
        self.assertEqual(ignored.iterations, cold.iterations)


class ValidationTest(unittest.TestCase):
    def test_asymmetric_hessian(self):
        with self.assertRaises(ArgumentOutOfRangeError):
            stack_constraints(QuadraticProgram(np.array([[1.0, 1.0], [0.0, 1.0]]), np.zeros(2)))

    def test_mismatched_rows(self):
        with self.assertRaises(DimensionMismatchError):
            stack_constraints(QuadraticProgram(np.eye(2), np.zeros(2), np.ones((1, 3)), np.zeros(1)))

    def test_infinite_rows_are_dropped(self):
        P, q, A, l, u = stack_constraints(QuadraticProgram(np.eye(2), np.zeros(2), ineq_matrix=np.eye(2),
                                                           ineq_upper=[np.inf, 1.0], lower=[0.0, -np.inf],
                                                           upper=[np.inf, np.inf]))
        self.assertEqual(A.shape, (2, 2))
        np.testing.assert_array_equal(u, [1.0, np.inf])
        np.testing.assert_array_equal(l, [-np.inf, 0.0])

    def test_bad_tolerance(self):
        with self.assertRaises(ArgumentOutOfRangeError):
            solve_qp(QuadraticProgram(np.eye(1), np.zeros(1)), tol=0.0)


if __name__ == '__main__':
    unittest.main()
