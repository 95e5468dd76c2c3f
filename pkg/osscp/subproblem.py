#
# Copyright (C) 2026 osscp developers. See LICENSE file for terms.
#
"""
Builders turning a LinearizedProblem into QuadraticPrograms: the prox-linear step, the consensus primal update and
the projection onto the convexified constraint set. Every 1-norm or absolute penalty becomes a slack variable with
epigraph rows, and the convex set Z^c becomes bounds and equality rows.
"""
import logging

import numpy as np
import scipy.sparse as sp

from osscp.constants import QP_TOL, QP_MAX_ITER
from osscp.errors import ArgumentOutOfRangeError, DimensionMismatchError
from osscp.functions import assert_solved
from osscp.problem import requires_matching_dims, validate_weights, ineq_penalty_mode
from osscp.qp import QuadraticProgram, QpLayout, solve_qp

logger = logging.getLogger(__name__)


class _Rows(object):
    """Accumulates sparse rows over the trajectory variables."""

    def __init__(self, n_cols):
        self.n_cols = n_cols
        self.rows = []
        self.cols = []
        self.vals = []
        self.rhs = []

    def add_block(self, col_start, block, rhs):
        """block acts on variables col_start ... col_start + block.shape[1]; one row per rhs entry."""
        block = np.atleast_2d(block)
        base = len(self.rhs)
        r, c = np.nonzero(block)
        self.rows.extend(base + r)
        self.cols.extend(col_start + c)
        self.vals.extend(block[r, c])
        self.rhs.extend(np.atleast_1d(rhs))

    def add_entry(self, row_offset, col, value):
        self.rows.append(len(self.rhs) - row_offset)
        self.cols.append(col)
        self.vals.append(value)

    def matrix(self):
        return sp.csc_matrix((self.vals, (self.rows, self.cols)), shape=(len(self.rhs), self.n_cols))

    def vector(self):
        return np.asarray(self.rhs, dtype=float)


def _linear_rows(lin, which):
    """Rows M z = offset whose residual M z - offset is the linearized expression for which."""
    dims = lin.dims
    n_z, n_x, K = dims.n_z, dims.n_x, dims.K
    N = (K + 1) * n_z
    rows = _Rows(N)
    ref = lin.reference.points
    if which == "dynamics":
        # x_{k+1} - f_k - A_k (z_k - r_k)
        for k in range(K):
            A_k = lin.dyn_jacobians[k]
            rows.add_block(k * n_z, -A_k, lin.dyn_values[k] - A_k.dot(ref[k]))
            for i in range(n_x):
                rows.add_entry(n_x - i, (k + 1) * n_z + i, 1.0)
    else:
        values, jacobians = (lin.ineq_values, lin.ineq_jacobians) if which == "ineq" \
            else (lin.eq_values, lin.eq_jacobians)
        for k in range(K + 1):
            if values[k].size:
                rows.add_block(k * n_z, jacobians[k], jacobians[k].dot(ref[k]) - values[k])
    return rows.matrix(), rows.vector()


def _convex_set_rows(lin):
    """Z^c as (eq_matrix, eq_rhs, lower, upper) over the stacked trajectory, with u_K = 0."""
    dims = lin.dims
    n_z, n_x, K = dims.n_z, dims.n_x, dims.K
    N = (K + 1) * n_z
    rows = _Rows(N)
    lower = np.empty(N)
    upper = np.empty(N)
    for k, step in enumerate(lin.convex_steps):
        lower[k * n_z:(k + 1) * n_z] = step.lower
        upper[k * n_z:(k + 1) * n_z] = step.upper
        if step.eq_rhs.size:
            rows.add_block(k * n_z, step.eq_matrix, step.eq_rhs)
    terminal_u = slice(K * n_z + n_x, (K + 1) * n_z)
    lower[terminal_u] = np.maximum(lower[terminal_u], 0.0)
    upper[terminal_u] = np.minimum(upper[terminal_u], 0.0)
    return rows.matrix(), rows.vector(), lower, upper


def _penalized_qp(lin, weights, center, proximal):
    """
    min  sum_k cost_model_k(z_k) + w1 sum|dyn defects| + w2 sum pen(g~) + w3 sum|h~| + 1/2 sum proximal (z - center)^2
    over z in Z^c, written with one slack per penalized scalar.
    """
    validate_weights(weights)
    dims = lin.dims
    n_z, K = dims.n_z, dims.K
    N = (K + 1) * n_z
    ref = lin.reference.points

    positive_ineq = ineq_penalty_mode(weights) == "positive"
    expr_blocks = []
    expr_offsets = []
    slack_weights = []
    slack_positive = []
    for which, weight, positive in (("dynamics", weights.w1, False),
                                    ("ineq", weights.w2, positive_ineq),
                                    ("eq", weights.w3, False)):
        matrix, offset = _linear_rows(lin, which)
        if weight == 0 or not offset.size:
            continue
        expr_blocks.append(matrix)
        expr_offsets.append(offset)
        slack_weights.append(np.full(offset.size, float(weight)))
        slack_positive.append(np.full(offset.size, positive))
    if expr_blocks:
        expr_matrix = sp.vstack(expr_blocks, format='csc')
        expr_offset = np.concatenate(expr_offsets)
        slack_weight = np.concatenate(slack_weights)
        positive = np.concatenate(slack_positive)
    else:
        expr_matrix = sp.csc_matrix((0, N))
        expr_offset = np.zeros(0)
        slack_weight = np.zeros(0)
        positive = np.zeros(0, dtype=bool)
    n_s = expr_offset.size

    hessian_z = sp.block_diag([lin.cost_hessians[k] for k in range(K + 1)], format='csc') + sp.diags(proximal)
    linear_z = np.concatenate([lin.cost_gradients[k] - lin.cost_hessians[k].dot(ref[k]) for k in range(K + 1)])
    linear_z = linear_z - proximal * center
    offset = sum(lin.cost_values[k] - lin.cost_gradients[k].dot(ref[k])
                 + 0.5 * ref[k].dot(lin.cost_hessians[k].dot(ref[k])) for k in range(K + 1))
    offset += 0.5 * float(np.sum(proximal * center ** 2))

    linear = np.concatenate([linear_z, slack_weight])
    eq_z, eq_rhs, lower_z, upper_z = _convex_set_rows(lin)
    if n_s:
        hessian = sp.block_diag([hessian_z, sp.csc_matrix((n_s, n_s))], format='csc')
        # e - t <= 0 for every slack, -e - t <= 0 for the absolute ones
        identity = sp.identity(n_s, format='csc')
        absolute = np.flatnonzero(~positive)
        ineq_matrix = sp.vstack([sp.hstack([expr_matrix, -identity]),
                                 sp.hstack([-expr_matrix[absolute], -identity[absolute]])], format='csc')
        ineq_upper = np.concatenate([expr_offset, -expr_offset[absolute]])
        eq_matrix = sp.hstack([eq_z, sp.csc_matrix((eq_z.shape[0], n_s))], format='csc')
    else:
        hessian = hessian_z
        ineq_matrix = None
        ineq_upper = None
        eq_matrix = eq_z
    lower = np.concatenate([lower_z, np.zeros(n_s)])
    upper = np.concatenate([upper_z, np.full(n_s, np.inf)])

    layout = QpLayout(dims.n_x, dims.n_u, K, n_s, expr_matrix, expr_offset, positive)
    return QuadraticProgram(hessian, linear, eq_matrix, eq_rhs, ineq_matrix, ineq_upper, lower, upper,
                            float(offset), layout)


def component_mask(dims, mask=None):
    """Boolean mask over the stacked trajectory from a per-point mask over z_k (None selects everything)."""
    if mask is None:
        return np.ones((dims.K + 1) * dims.n_z, dtype=bool)
    mask = np.asarray(mask, dtype=bool).ravel()
    if mask.size != dims.n_z:
        raise DimensionMismatchError("consensus mask has %d entries, z_k has %d." % (mask.size, dims.n_z))
    return np.tile(mask, dims.K + 1)


@requires_matching_dims()
def build_scp_qp(lin, weights, prox_center):
    """QP whose optimum is the minimizer of the prox-linear cost about lin.reference, centered at prox_center."""
    N = (lin.dims.K + 1) * lin.dims.n_z
    return _penalized_qp(lin, weights, prox_center.flat(), np.full(N, float(weights.wp)))


@requires_matching_dims()
def build_consensus_qp(lin, rho, zbar, dual, weights, mask=None):
    """
    The consensus primal update: the proximal term becomes (rho/2)||z - zbar + dual||^2.

    optional arguments:
    * mask: per-component consensus mask over z_k. Unmasked components keep the proximal term of weight wp about
      lin.reference.
    """
    if not rho > 0:
        raise ArgumentOutOfRangeError("consensus penalty rho must be positive, got %r." % (rho,))
    selected = component_mask(lin.dims, mask)
    center = np.where(selected, zbar.flat() - dual.flat(), lin.reference.flat())
    proximal = np.where(selected, float(rho), float(weights.wp))
    return _penalized_qp(lin, weights, center, proximal)


@requires_matching_dims()
def build_projection_qp(lin, v):
    """min 1/2||z - v||^2 over Z^c with linearized dynamics equalities, g~ <= 0 and h~ = 0."""
    dims = lin.dims
    N = (dims.K + 1) * dims.n_z
    dyn_matrix, dyn_rhs = _linear_rows(lin, "dynamics")
    eq_nl, eq_nl_rhs = _linear_rows(lin, "eq")
    ineq_matrix, ineq_upper = _linear_rows(lin, "ineq")
    eq_z, eq_rhs, lower, upper = _convex_set_rows(lin)
    center = v.flat()
    layout = QpLayout(dims.n_x, dims.n_u, dims.K, 0, sp.csc_matrix((0, N)), np.zeros(0), np.zeros(0, dtype=bool))
    return QuadraticProgram(sp.identity(N, format='csc'), -center,
                            sp.vstack([dyn_matrix, eq_nl, eq_z], format='csc'),
                            np.concatenate([dyn_rhs, eq_nl_rhs, eq_rhs]),
                            ineq_matrix, ineq_upper, lower, upper, 0.5 * float(center.dot(center)), layout)


def project_onto_Z(lin_at_mean, v, tol=QP_TOL, max_iter=QP_MAX_ITER):
    """
    Euclidean projection of v onto the convexified constraint set at lin_at_mean.reference.

    raises ProjectionInfeasibleError when that set is empty.
    """
    solution = solve_qp(build_projection_qp(lin_at_mean, v), tol=tol, max_iter=max_iter)
    assert_solved(solution, projection=True)
    if solution.status != "solved":
        logger.warning("projection stopped at %s after %d iterations", solution.status, solution.iterations)
    return solution.trajectory
