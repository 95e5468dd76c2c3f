#
# Copyright (C) 2026 osscp developers. See LICENSE file for terms.
#
"""
Multi-start standard SCP: each initial guess is refined by prox-linear iterations until the penalized cost stalls.
"""
import collections
import logging
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from osscp.constants import QP_TOL, QP_MAX_ITER, DESCENT_SLACK
from osscp.errors import ArgumentOutOfRangeError, OsscpError
from osscp.functions import assert_solved
from osscp.problem import requires_matching_dims, validate_weights, linearize, true_penalized_cost
from osscp.qp import solve_qp
from osscp.subproblem import build_scp_qp

logger = logging.getLogger(__name__)


"""ScpConfig: penalty weights, the cost stagnation tolerance eps_c, the iteration cap and subproblem settings.
"""
ScpConfig = collections.namedtuple('ScpConfig', ['weights', 'eps_c', 'max_iters', 'tol', 'qp_max_iter'])
ScpConfig.__new__.__defaults__ = (QP_TOL, QP_MAX_ITER)


"""ScpRunRecord: iterates z^0 ... z^J with their true penalized costs and subproblem statuses. converged is set
when the cost stalled within eps_c with no descent violation. error holds the exception of a failed run.
"""
ScpRunRecord = collections.namedtuple('ScpRunRecord', ['trajectories', 'costs', 'statuses', 'final_cost',
                                                       'iterations', 'converged', 'descent_violations',
                                                       'wall_time', 'error'])
ScpRunRecord.__new__.__defaults__ = (0.0, None)


def final_trajectory(record):
    return record.trajectories[-1]


def validate_scp_config(cfg):
    validate_weights(cfg.weights, for_solve=True)
    if not cfg.eps_c > 0:
        raise ArgumentOutOfRangeError("eps_c must be positive, got %r." % (cfg.eps_c,))
    if cfg.max_iters < 1:
        raise ArgumentOutOfRangeError("max_iters must be >= 1, got %r." % (cfg.max_iters,))
    if not cfg.tol > 0:
        raise ArgumentOutOfRangeError("subproblem tol must be positive, got %r." % (cfg.tol,))
    return cfg


@requires_matching_dims()
def scp_solve(problem, guess, cfg):
    """
    Iterate z^{j+1} = argmin Gamma(z^j, .) from guess until |J(z^{j+1}) - J(z^j)| <= eps_c or max_iters.

    raises SubproblemFailedError (with the iteration index) when a subproblem is infeasible or unbounded.
    """
    validate_scp_config(cfg)
    started = time.perf_counter()
    z = guess
    cost = true_penalized_cost(problem, cfg.weights, z)
    trajectories = [z]
    costs = [cost]
    statuses = []
    violations = []
    converged = False
    solution = None
    for iteration in range(1, cfg.max_iters + 1):
        lin = linearize(problem, z)
        solution = solve_qp(build_scp_qp(lin, cfg.weights, z), tol=cfg.tol, max_iter=cfg.qp_max_iter,
                            warm_start=solution)
        assert_solved(solution, iteration=iteration)
        if solution.status != "solved":
            logger.warning("scp iteration %d: subproblem stopped at %s, continuing from its best iterate",
                           iteration, solution.status)
        z = solution.trajectory
        new_cost = true_penalized_cost(problem, cfg.weights, z)
        trajectories.append(z)
        costs.append(new_cost)
        statuses.append(solution.status)
        if new_cost > cost + DESCENT_SLACK:
            logger.warning("scp iteration %d: penalized cost rose from %.9g to %.9g", iteration, cost, new_cost)
            violations.append(iteration)
        logger.debug("scp iteration %d: cost %.9g (qp %d iterations)", iteration, new_cost, solution.iterations)
        stalled = abs(new_cost - cost) <= cfg.eps_c
        cost = new_cost
        if stalled:
            converged = not violations
            break
    record = ScpRunRecord(tuple(trajectories), tuple(costs), tuple(statuses), cost, len(statuses), converged,
                          tuple(violations), time.perf_counter() - started, None)
    logger.info("scp finished after %d iterations: cost %.9g, converged=%s", record.iterations, cost, converged)
    return record


def _failed_record(problem, guess, cfg, error, wall_time):
    try:
        cost = true_penalized_cost(problem, cfg.weights, guess)
    except OsscpError:
        cost = np.nan
    return ScpRunRecord((guess,), (cost,), (), np.nan, 0, False, (), wall_time, error)


def multi_start(problem, guesses, cfg, max_workers=None):
    """
    Run scp_solve from every guess.

    optional arguments:
    * max_workers: thread pool size (default: one worker per guess).
    returns: one ScpRunRecord per guess, in guess order. A failed run keeps its exception in record.error.
    """
    guesses = list(guesses)
    if not guesses:
        raise ArgumentOutOfRangeError("multi-start SCP needs at least one guess.")
    validate_scp_config(cfg)

    def run_one(guess):
        started = time.perf_counter()
        try:
            return scp_solve(problem, guess, cfg)
        except (OsscpError, ArithmeticError, np.linalg.LinAlgError, RuntimeError) as e:
            logger.error("scp run failed: %s", e)
            return _failed_record(problem, guess, cfg, e, time.perf_counter() - started)

    with ThreadPoolExecutor(max_workers=max_workers or len(guesses)) as executor:
        return list(executor.map(run_one, guesses))
