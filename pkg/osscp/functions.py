#
# Copyright (C) 2026 osscp developers. See LICENSE file for terms.
#
from __future__ import division
import numpy as np
from osscp.constants import CSV_FLOAT_FORMAT, USABLE_STATUSES
from osscp.errors import SubproblemFailedError, ProjectionInfeasibleError


def finite_difference_jacobian(fn, x, step=1e-6):
    """
        finite_difference_jacobian(
                callable                fn
                ndarray                 x
                float                   step
                )

        Central differences of a vector (or scalar) valued fn at x. Returns an array of shape
        (len(fn(x)), len(x)), or (len(x),) when fn is scalar valued.
    """
    x = np.asarray(x, dtype=float)
    f0 = np.asarray(fn(x), dtype=float)
    jac = np.zeros(f0.shape + x.shape)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = step
        jac[..., i] = (np.asarray(fn(x + e)) - np.asarray(fn(x - e))) / (2 * step)
    return jac


def relative_error(actual, expected, floor=1.0):
    """Largest absolute deviation divided by max(floor, largest magnitude of expected)."""
    actual = np.asarray(actual, dtype=float)
    expected = np.asarray(expected, dtype=float)
    scale = max(floor, float(np.max(np.abs(expected))) if expected.size else 0.0)
    if actual.size == 0:
        return 0.0
    return float(np.max(np.abs(actual - expected))) / scale


def format_float(value):
    """Fixed 12 significant digit rendering used in every CSV the package writes."""
    return CSV_FLOAT_FORMAT % value


def assert_solved(solution, iteration=None, agent_id=None, projection=False):
    """Raise if a subproblem status cannot be continued from.

    max-iters is accepted: the solution then carries the best iterate found."""
    if solution.status in USABLE_STATUSES:
        return
    error_class = ProjectionInfeasibleError if projection else SubproblemFailedError
    where = []
    if iteration is not None:
        where.append("iteration %d" % iteration)
    if agent_id is not None:
        where.append("agent %s" % agent_id)
    message = "%s subproblem ended %s" % ("projection" if projection else "convex", solution.status)
    if where:
        message += " (%s)" % ", ".join(where)
    raise error_class(message, iteration=iteration, agent_id=agent_id, status=solution.status)
