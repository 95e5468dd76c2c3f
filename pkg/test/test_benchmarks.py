#
# Copyright (C) 2026 osscp developers. See LICENSE file for terms.
#
"""
Full-size benchmark reproductions on the unicycle scenarios
"""

from __future__ import print_function

import unittest

from osscp.consensus import osscp_solve
from osscp.functions import relative_error
from osscp.scenarios import homotopy_class, make_guess
from osscp.scp import multi_start, scp_solve, final_trajectory
from test.test_helpers import ScenarioTest, run_benchmarks


class BenchmarkTest(ScenarioTest):
    def test_multi_start_scp_stays_in_homotopy_class(self):
        """test_multi_start_scp_stays_in_homotopy_class
        note: test assumes you have set OSSCP_RUN_BENCHMARKS=1"""
        if not run_benchmarks:
            return
        scenario = self.build("unicycle-basic")
        records = multi_start(scenario.problem, [g for _, g in scenario.guesses], scenario.scp_config)
        costs = {}
        for (name, guess), record in zip(scenario.guesses, records):
            self.assertIsNone(record.error)
            self.assertTrue(record.converged, name)
            self.assertEqual(record.descent_violations, ())
            self.assertEqual(homotopy_class(final_trajectory(record), scenario.obstacles),
                             homotopy_class(guess, scenario.obstacles))
            costs[name] = record.final_cost
        self.assertLessEqual(abs(costs["over"] - costs["under"]), 1e-6 * abs(costs["over"]))
        self.assertLessEqual(costs["straight"], 0.95 * min(costs["over"], costs["under"]))

    def test_osscp_reaches_consensus_at_best_cost(self):
        """test_osscp_reaches_consensus_at_best_cost
        note: test assumes you have set OSSCP_RUN_BENCHMARKS=1"""
        if not run_benchmarks:
            return
        scenario = self.build("unicycle-basic")
        guesses = [g for _, g in scenario.guesses]
        result = osscp_solve(scenario.problem, guesses, scenario.osscp_config)
        self.assertTrue(result.converged)
        final = result.history[-1]
        self.assertLessEqual(max(final.primal_residuals), 1e-3)
        self.assertLessEqual(final.dual_residual, 1e-3)
        best = min(r.final_cost for r in multi_start(scenario.problem, guesses, scenario.scp_config))
        self.assertLessEqual(relative_error(final.cost, best, floor=0.0), 1e-3)

    def test_osscp_explores_the_lower_corridor(self):
        """test_osscp_explores_the_lower_corridor
        note: test assumes you have set OSSCP_RUN_BENCHMARKS=1"""
        if not run_benchmarks:
            return
        scenario = self.build("unicycle-terrain")
        guesses = [g for _, g in scenario.guesses]
        for guess in guesses:
            self.assertNotEqual(homotopy_class(guess, scenario.obstacles), "lower-corridor")
        records = multi_start(scenario.problem, guesses, scenario.scp_config)
        result = osscp_solve(scenario.problem, guesses, scenario.osscp_config)
        best_scp = min(r.final_cost for r in records)
        self.assertGreater(best_scp, result.history[-1].cost)
        self.assertEqual(homotopy_class(result.zbar, scenario.obstacles), "lower-corridor")

        lower = make_guess("lower-corridor", scenario.params, scenario.obstacles, scenario.terrain)
        record = scp_solve(scenario.problem, lower, scenario.scp_config)
        self.assertLessEqual(relative_error(record.final_cost, result.history[-1].cost, floor=0.0), 1e-3)


if __name__ == '__main__':
    unittest.main()
