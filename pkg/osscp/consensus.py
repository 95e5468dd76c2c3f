#
# Copyright (C) 2026 osscp developers. See LICENSE file for terms.
#
"""
Operator-Splitting SCP: consensus ADMM over agents started from different guesses. Each outer iteration runs the
agents' prox-linear primal updates in parallel, projects the shifted agent mean onto the constraint set convexified
about the agent mean, and updates the scaled duals.
"""
import collections
import logging
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from osscp.constants import QP_TOL, QP_MAX_ITER, DEFAULT_MAX_PROJECTION_FAILURES
from osscp.errors import ArgumentOutOfRangeError, ProjectionInfeasibleError, SubproblemFailedError
from osscp.functions import assert_solved
from osscp.problem import requires_matching_dims, validate_weights, linearize, true_penalized_cost
from osscp.qp import solve_qp
from osscp.subproblem import build_consensus_qp, project_onto_Z
from osscp.trajectory import Trajectory, mean_trajectory

logger = logging.getLogger(__name__)


"""AgentState: agent id, its trajectory z_i and its scaled dual xi_i (same layout as z_i).
"""
AgentState = collections.namedtuple('AgentState', ['id', 'trajectory', 'dual'])


"""ConsensusState: the consensus trajectory after outer iteration j, the primal residual norm of every agent, the dual
residual norm, the true penalized cost of zbar, and whether the projection failed (zbar then repeats the previous).
"""
ConsensusState = collections.namedtuple('ConsensusState', ['iteration', 'zbar', 'primal_residuals',
                                                           'dual_residual', 'cost', 'projection_failed'])


"""OsscpConfig: consensus penalty rho, residual tolerances eps_r / eps_s, cost stagnation tolerance eps_c, the outer
iteration cap j_max, penalty weights and subproblem settings.
consensus_mask selects the components of z_k kept in consensus (None: all of them).
"""
OsscpConfig = collections.namedtuple('OsscpConfig', ['rho', 'eps_r', 'eps_s', 'eps_c', 'j_max', 'weights', 'tol',
                                                     'qp_max_iter', 'consensus_mask', 'max_projection_failures',
                                                     'max_workers'])
OsscpConfig.__new__.__defaults__ = (QP_TOL, QP_MAX_ITER, None, DEFAULT_MAX_PROJECTION_FAILURES, None)


"""OsscpResult: history[j] is the ConsensusState after iteration j (history[0] holds the initial projection),
agent_history[j] the agents after it. reason is 'residuals', 'cost-stagnation', 'max-iters' or 'projection-failed'.
"""
OsscpResult = collections.namedtuple('OsscpResult', ['history', 'zbar', 'agent_history', 'converged', 'iterations',
                                                     'reason', 'wall_time'])


def validate_osscp_config(cfg):
    validate_weights(cfg.weights, for_solve=True)
    for name in ('rho', 'eps_r', 'eps_s', 'eps_c', 'tol'):
        value = getattr(cfg, name)
        if not value > 0:
            raise ArgumentOutOfRangeError("%s must be positive, got %r." % (name, value))
    if cfg.j_max < 1:
        raise ArgumentOutOfRangeError("j_max must be >= 1, got %r." % (cfg.j_max,))
    if cfg.max_projection_failures < 1:
        raise ArgumentOutOfRangeError("max_projection_failures must be >= 1, got %r." % (cfg.max_projection_failures,))
    return cfg


def _mask(trajectory, cfg):
    mask = cfg.consensus_mask if cfg is not None else None
    if mask is None:
        return None
    mask = np.asarray(mask, dtype=bool).ravel()
    if mask.size != trajectory.n_z:
        raise ArgumentOutOfRangeError("consensus mask has %d entries, z_k has %d." % (mask.size, trajectory.n_z))
    return mask


def _agent_step(problem, agent, zbar, cfg, warm_start=None):
    lin = linearize(problem, agent.trajectory)
    qp = build_consensus_qp(lin, cfg.rho, zbar, agent.dual, cfg.weights, mask=cfg.consensus_mask)
    solution = solve_qp(qp, tol=cfg.tol, max_iter=cfg.qp_max_iter, warm_start=warm_start)
    assert_solved(solution, agent_id=agent.id)
    if solution.status != "solved":
        logger.warning("agent %s: subproblem stopped at %s", agent.id, solution.status)
    return agent._replace(trajectory=solution.trajectory), solution


def primal_update(problem, agent, zbar, cfg):
    """Agent step: argmin Theta(z_i^j, z) + (rho/2)||z - zbar + xi_i||^2, linearized about the agent's trajectory."""
    return _agent_step(problem, agent, zbar, cfg)[0]


def agent_mean(agents):
    return mean_trajectory([a.trajectory for a in agents])


def shifted_mean(agents, cfg=None):
    """Mean of z_i + xi_i on the consensus components; the plain agent mean elsewhere."""
    mean = agent_mean(agents)
    shifted = mean_trajectory([a.trajectory + a.dual for a in agents])
    mask = _mask(mean, cfg)
    if mask is None:
        return shifted
    return mean.with_points(np.where(mask, shifted.points, mean.points))


def consensus_update(problem, agents, cfg):
    """
    zbar = projection of the shifted agent mean onto Z, with the nonconvex constraints linearized about the agent
    mean.

    raises ProjectionInfeasibleError when the convexified set is empty.
    """
    if not agents:
        raise ArgumentOutOfRangeError("consensus needs at least one agent.")
    lin = linearize(problem, agent_mean(agents))
    return project_onto_Z(lin, shifted_mean(agents, cfg), tol=cfg.tol, max_iter=cfg.qp_max_iter)


def dual_update(agent, zbar, mask=None):
    """xi_i <- xi_i + (z_i - zbar) on the consensus components."""
    step = agent.trajectory - zbar
    if mask is not None:
        step = step.with_points(np.where(np.asarray(mask, dtype=bool), step.points, 0.0))
    return agent._replace(dual=agent.dual + step)


def residuals(agents, zbar_new, zbar_old, rho, mask=None):
    """
    returns: ([||z_i - zbar_new|| for each agent], rho * ||zbar_new - zbar_old||), over the consensus components.
    """
    primal = [a.trajectory.distance(zbar_new, mask=mask) for a in agents]
    dual = rho * zbar_new.distance(zbar_old, mask=mask)
    return primal, dual


def _initial_consensus(problem, agents, cfg):
    mean = agent_mean(agents)
    try:
        return project_onto_Z(linearize(problem, mean), mean, tol=cfg.tol, max_iter=cfg.qp_max_iter), False
    except ProjectionInfeasibleError:
        logger.warning("initial projection infeasible, starting from the agent mean")
        return mean, True


@requires_matching_dims()
def osscp_solve(problem, guesses, cfg):
    """
    Run consensus ADMM over one agent per guess.

    Stops when every primal residual is within eps_r and the dual residual within eps_s, when the cost of zbar
    changes by at most eps_c, at j_max, or after max_projection_failures consecutive infeasible projections. An
    iteration whose projection failed never counts as converged.
    raises SubproblemFailedError (with iteration and agent id) when an agent subproblem fails.
    """
    validate_osscp_config(cfg)
    guesses = list(guesses)
    if not guesses:
        raise ArgumentOutOfRangeError("OS-SCP needs at least one guess.")
    if len(guesses) == 1:
        logger.info("single agent: OS-SCP reduces to prox-linear SCP with weight rho")
    mask = _mask(guesses[0], cfg)
    started = time.perf_counter()

    agents = [AgentState(i, g, Trajectory.zeros_like(g)) for i, g in enumerate(guesses)]
    zbar, failed = _initial_consensus(problem, agents, cfg)
    failures = 1 if failed else 0
    cost = true_penalized_cost(problem, cfg.weights, zbar)
    primal, _ = residuals(agents, zbar, zbar, cfg.rho, mask)
    history = [ConsensusState(0, zbar, tuple(primal), 0.0, cost, failed)]
    agent_history = [tuple(agents)]
    reason = "max-iters"
    converged = False

    warm = [None] * len(agents)
    with ThreadPoolExecutor(max_workers=cfg.max_workers or len(agents)) as executor:
        for j in range(1, cfg.j_max + 1):
            futures = [executor.submit(_agent_step, problem, a, zbar, cfg, w) for a, w in zip(agents, warm)]
            try:
                steps = [future.result() for future in futures]
            except SubproblemFailedError as e:
                e.iteration = j
                raise
            agents = [agent for agent, _ in steps]
            warm = [solution for _, solution in steps]

            try:
                zbar_new = consensus_update(problem, agents, cfg)
                failed = False
                failures = 0
            except ProjectionInfeasibleError as e:
                failures += 1
                failed = True
                zbar_new = zbar
                logger.warning("iteration %d: %s; keeping the previous consensus (%d in a row)", j, e, failures)

            agents = [dual_update(a, zbar_new, mask) for a in agents]
            primal, dual = residuals(agents, zbar_new, zbar, cfg.rho, mask)
            new_cost = true_penalized_cost(problem, cfg.weights, zbar_new)
            history.append(ConsensusState(j, zbar_new, tuple(primal), dual, new_cost, failed))
            agent_history.append(tuple(agents))
            logger.debug("osscp iteration %d: cost %.9g, primal %.3e, dual %.3e", j, new_cost, max(primal), dual)

            if failures >= cfg.max_projection_failures:
                logger.error("iteration %d: %d consecutive projection failures, aborting", j, failures)
                reason = "projection-failed"
                break
            if not failed and max(primal) <= cfg.eps_r and dual <= cfg.eps_s:
                reason = "residuals"
                converged = True
                break
            if not failed and abs(new_cost - cost) <= cfg.eps_c:
                reason = "cost-stagnation"
                converged = True
                break
            zbar = zbar_new
            cost = new_cost

    final = history[-1]
    logger.info("osscp finished after %d iterations (%s): cost %.9g", final.iteration, reason, final.cost)
    return OsscpResult(tuple(history), final.zbar, tuple(agent_history), converged, final.iteration, reason,
                       time.perf_counter() - started)
