#
# Copyright (C) 2026 osscp developers. See LICENSE file for terms.
#
"""
Convex quadratic programs and the operator-splitting (ADMM) solver used for every subproblem and projection.

The solver works on the stacked form  min 1/2 x'Px + q'x  s.t.  l <= Ax <= u, where A collects the equality rows,
the one-sided inequality rows and one identity row per bounded variable. It equilibrates the data, iterates the
over-relaxed ADMM splitting with a step size that adapts to the residual balance, checks primal and dual
infeasibility certificates, and polishes the iterate by solving the reduced KKT system on the guessed active set.
Residuals are reported on the unscaled problem, normalized by the magnitude of the quantities they compare.
"""
from __future__ import division
import collections
import logging

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from osscp.constants import QP_TOL, QP_MAX_ITER, QP_SIGMA, QP_ALPHA, QP_RHO, QP_RHO_MIN, QP_RHO_MAX, \
    QP_RHO_EQ_SCALE, QP_RHO_ADAPT_RATIO, QP_CHECK_INTERVAL, QP_SCALING_ITER, QP_SCALING_MIN, QP_SCALING_MAX, \
    QP_INFEASIBILITY_TOL, QP_POLISH_DELTA, QP_POLISH_REFINE_ITER, QP_POLISH_GATE, status_num
from osscp.errors import ArgumentOutOfRangeError, DimensionMismatchError
from osscp.trajectory import Trajectory

logger = logging.getLogger(__name__)


"""QuadraticProgram: min 1/2 x'Hx + c'x + offset subject to eq_matrix x = eq_rhs, ineq_matrix x <= ineq_upper and
lower <= x <= upper. Missing constraint groups are None. layout (a QpLayout) is set when x stacks a trajectory.
"""
QuadraticProgram = collections.namedtuple('QuadraticProgram', ['hessian', 'linear', 'eq_matrix', 'eq_rhs',
                                                               'ineq_matrix', 'ineq_upper', 'lower', 'upper',
                                                               'offset', 'layout'])
QuadraticProgram.__new__.__defaults__ = (None, None, None, None, None, None, 0.0, None)


"""QpLayout: x = [z_0; ...; z_K; t]. Slack t_i bounds the penalized expression e_i = expr_matrix[i] z - expr_offset[i]
(|e_i| <= t_i, or e_i <= t_i with t_i >= 0 where slack_positive[i] is set).
"""
QpLayout = collections.namedtuple('QpLayout', ['n_x', 'n_u', 'K', 'n_slack', 'expr_matrix', 'expr_offset',
                                               'slack_positive'])


"""SubproblemSolution: primal x and multipliers y of the stacked constraints, the trajectory and slacks unpacked from
x when the program has a layout, the objective, the normalized KKT residuals, ADMM iterations, the status
('solved', 'max-iters', 'infeasible' or 'unbounded') and its SOLVER_STATUS code. polished is set when the active-set
refinement was accepted. (x, y) warm starts the next solve of a program with the same constraint structure.
"""
SubproblemSolution = collections.namedtuple('SubproblemSolution', ['x', 'y', 'trajectory', 'slacks', 'objective',
                                                                   'primal_residual', 'dual_residual',
                                                                   'complementarity_residual', 'iterations',
                                                                   'status', 'polished', 'status_code'])


def _col_inf_norm(matrix):
    if matrix.shape[0] == 0 or matrix.nnz == 0:
        return np.zeros(matrix.shape[1])
    return np.asarray(abs(matrix).max(axis=0).toarray()).ravel()


def _row_inf_norm(matrix):
    if matrix.shape[1] == 0 or matrix.nnz == 0:
        return np.zeros(matrix.shape[0])
    return np.asarray(abs(matrix).max(axis=1).toarray()).ravel()


def _limit_scaling(norms):
    norms = np.where(norms < QP_SCALING_MIN, 1.0, norms)
    return np.minimum(norms, QP_SCALING_MAX)


def _inf_norm(vector):
    return float(np.max(np.abs(vector))) if vector.size else 0.0


def stack_constraints(qp):
    """
    Validate qp and convert it to (P, q, A, l, u) with l <= Ax <= u.

    Rows whose bounds are both infinite are dropped.
    """
    q = np.asarray(qp.linear, dtype=float).ravel()
    n = q.size
    P = sp.csc_matrix(qp.hessian, dtype=float)
    if P.shape != (n, n):
        raise DimensionMismatchError("Hessian has shape %s for %d variables." % (P.shape, n))
    asymmetry = abs(P - P.T)
    if asymmetry.nnz and asymmetry.max() > 1e-12 * max(1.0, abs(P).max()):
        raise ArgumentOutOfRangeError("Hessian is not symmetric.")

    blocks = []
    lowers = []
    uppers = []
    if qp.eq_matrix is not None:
        eq_matrix = sp.csc_matrix(qp.eq_matrix, dtype=float)
        eq_rhs = np.asarray(qp.eq_rhs, dtype=float).ravel()
        if eq_matrix.shape != (eq_rhs.size, n):
            raise DimensionMismatchError("equality rows have shape %s, right hand side %d, variables %d."
                                         % (eq_matrix.shape, eq_rhs.size, n))
        blocks.append(eq_matrix)
        lowers.append(eq_rhs)
        uppers.append(eq_rhs)
    if qp.ineq_matrix is not None:
        ineq_matrix = sp.csc_matrix(qp.ineq_matrix, dtype=float)
        ineq_upper = np.asarray(qp.ineq_upper, dtype=float).ravel()
        if ineq_matrix.shape != (ineq_upper.size, n):
            raise DimensionMismatchError("inequality rows have shape %s, right hand side %d, variables %d."
                                         % (ineq_matrix.shape, ineq_upper.size, n))
        blocks.append(ineq_matrix)
        lowers.append(np.full(ineq_upper.size, -np.inf))
        uppers.append(ineq_upper)
    lower = np.full(n, -np.inf) if qp.lower is None else np.asarray(qp.lower, dtype=float).ravel()
    upper = np.full(n, np.inf) if qp.upper is None else np.asarray(qp.upper, dtype=float).ravel()
    if lower.size != n or upper.size != n:
        raise DimensionMismatchError("variable bounds must have %d entries." % n)
    bounded = np.flatnonzero(np.isfinite(lower) | np.isfinite(upper))
    blocks.append(sp.csc_matrix((np.ones(bounded.size), (np.arange(bounded.size), bounded)),
                                shape=(bounded.size, n)))
    lowers.append(lower[bounded])
    uppers.append(upper[bounded])

    A = sp.vstack(blocks, format='csc') if blocks else sp.csc_matrix((0, n))
    l = np.concatenate(lowers)
    u = np.concatenate(uppers)
    keep = np.isfinite(l) | np.isfinite(u)
    if not np.all(keep):
        A = A[np.flatnonzero(keep)].tocsc()
        l = l[keep]
        u = u[keep]
    return P, q, A, l, u


class OperatorSplittingSolver(object):
    """
    ADMM on the stacked form, following the operator-splitting QP scheme:
        (x~, nu) from the KKT system [[P + sigma I, A'], [A, -diag(1/rho)]]
        x <- alpha x~ + (1 - alpha) x
        z <- clip(alpha z~ + (1 - alpha) z + y / rho, l, u)
        y <- y + rho (alpha z~ + (1 - alpha) z - z)
    """

    def __init__(self, P, q, A, l, u, tol=QP_TOL, max_iter=QP_MAX_ITER):
        self.P = P
        self.q = q
        self.A = A
        self.l = l
        self.u = u
        self.n = q.size
        self.m = l.size
        self.tol = tol
        self.max_iter = max_iter
        self.eq_rows = l == u
        self._scale_data()
        self._rho_base = QP_RHO
        self._set_rho()
        self._factor()

    def _scale_data(self):
        """Ruiz equilibration of the KKT matrix, then a cost scaling c."""
        n, m = self.n, self.m
        P = self.P.copy()
        A = self.A.copy()
        q = self.q.copy()
        D = np.ones(n)
        E = np.ones(m)
        c = 1.0
        for _ in range(QP_SCALING_ITER):
            col_norms = _col_inf_norm(P)
            if m:
                col_norms = np.maximum(col_norms, _col_inf_norm(A))
            d_step = 1.0 / np.sqrt(_limit_scaling(col_norms))
            e_step = 1.0 / np.sqrt(_limit_scaling(_row_inf_norm(A))) if m else np.ones(0)
            D_step = sp.diags(d_step)
            P = D_step.dot(P).dot(D_step).tocsc()
            if m:
                A = sp.diags(e_step).dot(A).dot(D_step).tocsc()
            q = d_step * q
            D *= d_step
            E *= e_step

            cost_norm = max(float(np.mean(_col_inf_norm(P))) if n else 0.0, _inf_norm(q))
            cost_step = 1.0 / float(_limit_scaling(np.array([cost_norm]))[0])
            P = (P * cost_step).tocsc()
            q = q * cost_step
            c *= cost_step

        self.D = D
        self.E = E
        self.c = c
        self.Ps = P
        self.qs = q
        self.As = A
        self.ls = E * self.l
        self.us = E * self.u

    def _set_rho(self):
        rho = np.full(self.m, self._rho_base)
        rho[self.eq_rows] *= QP_RHO_EQ_SCALE
        self.rho = np.clip(rho, QP_RHO_MIN, QP_RHO_MAX)

    def _factor(self):
        n = self.n
        top_left = self.Ps + QP_SIGMA * sp.identity(n, format='csc')
        if self.m:
            kkt = sp.bmat([[top_left, self.As.T], [self.As, sp.diags(-1.0 / self.rho)]], format='csc')
        else:
            kkt = top_left.tocsc()
        self._kkt_factor = spla.splu(kkt)

    def _step(self, x, z, y):
        n = self.n
        if self.m:
            rhs = np.concatenate([QP_SIGMA * x - self.qs, z - y / self.rho])
            sol = self._kkt_factor.solve(rhs)
            x_tilde = sol[:n]
            z_tilde = z + (sol[n:] - y) / self.rho
        else:
            x_tilde = self._kkt_factor.solve(QP_SIGMA * x - self.qs)
            z_tilde = z
        x_new = QP_ALPHA * x_tilde + (1.0 - QP_ALPHA) * x
        z_relaxed = QP_ALPHA * z_tilde + (1.0 - QP_ALPHA) * z
        z_new = np.minimum(np.maximum(z_relaxed + y / self.rho, self.ls), self.us)
        y_new = y + self.rho * (z_relaxed - z_new)
        return x_new, z_new, y_new

    def _unscale(self, x, z, y):
        return self.D * x, z / self.E, self.E * y / self.c

    def complementarity(self, Ax, y):
        """Natural residual ||Ax - clip(Ax + y, l, u)||: zero iff y lies in the normal cone of [l, u] at Ax."""
        if not self.m:
            return 0.0
        gap = Ax - np.minimum(np.maximum(Ax + y, self.l), self.u)
        return _inf_norm(gap) / max(1.0, _inf_norm(Ax))

    def residuals(self, x, z, y):
        """Normalized primal and dual residuals of unscaled (x, z, y)."""
        Ax = self.A.dot(x)
        Px = self.P.dot(x)
        Aty = self.A.T.dot(y)
        primal = _inf_norm(Ax - z) / max(1.0, _inf_norm(Ax), _inf_norm(z)) if self.m else 0.0
        dual = _inf_norm(Px + self.q + Aty) / max(1.0, _inf_norm(Px), _inf_norm(Aty), _inf_norm(self.q))
        return primal, dual, self.complementarity(Ax, y)

    def is_primal_infeasible(self, delta_y):
        """
        delta_y certifies infeasibility when  ||A' delta_y|| ~ 0  and  u'(delta_y)_+ + l'(delta_y)_- < 0.
        """
        delta_y = self.E * delta_y / self.c
        norm = _inf_norm(delta_y)
        if norm <= 1e-30:
            return False
        eps = QP_INFEASIBILITY_TOL * norm
        if _inf_norm(self.A.T.dot(delta_y)) > eps:
            return False
        positive = delta_y > 0
        negative = delta_y < 0
        support = np.sum(self.u[positive] * delta_y[positive]) + np.sum(self.l[negative] * delta_y[negative])
        return bool(support < -eps)

    def is_dual_infeasible(self, delta_x):
        """
        delta_x certifies unboundedness when  P delta_x ~ 0,  q'delta_x < 0  and  A delta_x  is a recession
        direction of [l, u].
        """
        delta_x = self.D * delta_x
        norm = _inf_norm(delta_x)
        if norm <= 1e-30:
            return False
        eps = QP_INFEASIBILITY_TOL * norm
        if self.q.dot(delta_x) >= -eps:
            return False
        if _inf_norm(self.P.dot(delta_x)) > eps:
            return False
        if self.m:
            A_delta = self.A.dot(delta_x)
            if np.any(np.isfinite(self.u) & (A_delta > eps)) or np.any(np.isfinite(self.l) & (A_delta < -eps)):
                return False
        return True

    def _adapt_rho(self, x, z, y):
        if not self.m:
            return
        Ax = self.As.dot(x)
        Px = self.Ps.dot(x)
        Aty = self.As.T.dot(y)
        primal = _inf_norm(Ax - z) / max(_inf_norm(Ax), _inf_norm(z), 1e-30)
        dual = _inf_norm(Px + self.qs + Aty) / max(_inf_norm(Px), _inf_norm(Aty), _inf_norm(self.qs), 1e-30)
        new_rho = self._rho_base * np.sqrt(primal / max(dual, 1e-30))
        new_rho = float(np.clip(new_rho, QP_RHO_MIN, QP_RHO_MAX))
        if new_rho > QP_RHO_ADAPT_RATIO * self._rho_base or new_rho < self._rho_base / QP_RHO_ADAPT_RATIO:
            logger.debug("step size %.3e -> %.3e", self._rho_base, new_rho)
            self._rho_base = new_rho
            self._set_rho()
            self._factor()

    def active_set(self, z, y):
        """Inequality rows guessed active at their lower and upper bound from unscaled (z, y)."""
        free = ~self.eq_rows
        return np.flatnonzero(free & (z - self.l < -y)), np.flatnonzero(free & (self.u - z < y))

    def polish(self, z, y, guess=None):
        """
        Solve the equality constrained QP on the active set guessed from (z, y), refine the regularized solve
        against the exact reduced KKT matrix, and accept the result when every residual is within tol.

        returns: (x, y, primal, dual, complementarity) or None when rejected.
        """
        n = self.n
        low, upp = self.active_set(z, y) if guess is None else guess
        eq = np.flatnonzero(self.eq_rows)
        active = np.concatenate([low, upp, eq]).astype(int)
        rhs = np.concatenate([-self.q, self.l[low], self.u[upp], self.l[eq]])
        if active.size:
            A_red = self.A[active]
            regularized = sp.bmat([[self.P + QP_POLISH_DELTA * sp.identity(n), A_red.T],
                                   [A_red, -QP_POLISH_DELTA * sp.identity(active.size)]], format='csc')
            exact = sp.bmat([[self.P, A_red.T], [A_red, None]], format='csc')
        else:
            regularized = (self.P + QP_POLISH_DELTA * sp.identity(n)).tocsc()
            exact = self.P
        try:
            factor = spla.splu(regularized)
        except RuntimeError:
            return None
        solution = factor.solve(rhs)
        for _ in range(QP_POLISH_REFINE_ITER):
            solution = solution + factor.solve(rhs - exact.dot(solution))
        if not np.all(np.isfinite(solution)):
            return None
        x = solution[:n]
        y_full = np.zeros(self.m)
        y_full[active] = solution[n:]
        Ax = self.A.dot(x)
        violation = np.maximum(self.l - Ax, 0.0) + np.maximum(Ax - self.u, 0.0)
        primal = _inf_norm(violation) / max(1.0, _inf_norm(Ax)) if self.m else 0.0
        Px = self.P.dot(x)
        Aty = self.A.T.dot(y_full)
        dual = _inf_norm(Px + self.q + Aty) / max(1.0, _inf_norm(Px), _inf_norm(Aty), _inf_norm(self.q))
        complementarity = self.complementarity(Ax, y_full)
        if max(primal, dual, complementarity) <= self.tol:
            return x, y_full, primal, dual, complementarity
        return None

    def warm_iterate(self, x0=None, y0=None):
        """Scaled (x, z, y) for unscaled x0, y0; z = clip(Ax0, l, u). Missing or misshapen parts start at zero."""
        x = np.zeros(self.n)
        y = np.zeros(self.m)
        if x0 is not None:
            x0 = np.asarray(x0, dtype=float).ravel()
            if x0.size == self.n and np.all(np.isfinite(x0)):
                x = x0 / self.D
        if y0 is not None:
            y0 = np.asarray(y0, dtype=float).ravel()
            if y0.size == self.m and np.all(np.isfinite(y0)):
                y = self.c * y0 / self.E
        z = np.minimum(np.maximum(self.As.dot(x), self.ls), self.us) if self.m else np.zeros(0)
        return x, z, y

    def solve(self, x0=None, y0=None):
        """returns: (x, y, primal, dual, complementarity, iterations, status, polished), unscaled."""
        x, z, y = self.warm_iterate(x0, y0)
        rejected = None
        best = None
        iteration = 0
        for iteration in range(1, self.max_iter + 1):
            x_prev = x
            y_prev = y
            x, z, y = self._step(x, z, y)
            if iteration % QP_CHECK_INTERVAL and iteration != self.max_iter:
                continue
            x_u, z_u, y_u = self._unscale(x, z, y)
            primal, dual, complementarity = self.residuals(x_u, z_u, y_u)
            worst = max(primal, dual, complementarity)
            if best is None or worst <= best[0]:
                best = (worst, x_u, y_u, primal, dual, complementarity)
            if worst <= self.tol:
                return x_u, y_u, primal, dual, complementarity, iteration, "solved", False
            if self.is_primal_infeasible(y - y_prev):
                return x_u, y_u, primal, dual, complementarity, iteration, "infeasible", False
            if self.is_dual_infeasible(x - x_prev):
                return x_u, y_u, primal, dual, complementarity, iteration, "unbounded", False
            if max(primal, dual) <= QP_POLISH_GATE:
                # a rejected active set is retried only once the guess changes
                guess = self.active_set(z_u, y_u)
                key = (guess[0].tobytes(), guess[1].tobytes())
                if key != rejected:
                    polished = self.polish(z_u, y_u, guess)
                    if polished is not None:
                        return polished + (iteration, "solved", True)
                    rejected = key
            self._adapt_rho(x, z, y)
        _, x_u, y_u, primal, dual, complementarity = best
        return x_u, y_u, primal, dual, complementarity, iteration, "max-iters", False


def solve_qp(qp, tol=QP_TOL, max_iter=QP_MAX_ITER, warm_start=None):
    """
    Solve a QuadraticProgram.

    optional arguments:
    * tol: bound on each normalized KKT residual (stationarity, primal feasibility, complementarity).
    * max_iter: ADMM iteration cap; on reaching it the best iterate seen is returned with status 'max-iters'.
    * warm_start: a SubproblemSolution (or an (x, y) pair) of a program with the same constraint structure. Parts
      whose size does not match are ignored.
    returns: SubproblemSolution. Identical inputs give bitwise identical solutions.
    """
    if not tol > 0:
        raise ArgumentOutOfRangeError("solver tolerance must be positive, got %r." % (tol,))
    if max_iter < 1:
        raise ArgumentOutOfRangeError("max_iter must be >= 1, got %r." % (max_iter,))
    P, q, A, l, u = stack_constraints(qp)
    n = q.size

    if np.any(l > u):
        logger.debug("presolve: crossed bounds on %d rows", int(np.sum(l > u)))
        return _package(qp, np.zeros(n), np.zeros(l.size), np.inf, np.inf, np.inf, 0, "infeasible", False)

    x0, y0 = (None, None) if warm_start is None else warm_start[:2]
    solver = OperatorSplittingSolver(P, q, A, l, u, tol=tol, max_iter=max_iter)
    x, y, primal, dual, complementarity, iterations, status, polished = solver.solve(x0, y0)
    logger.debug("qp n=%d m=%d: %s after %d iterations (polished=%s, residuals %.2e %.2e %.2e)",
                 n, l.size, status, iterations, polished, primal, dual, complementarity)
    return _package(qp, x, y, primal, dual, complementarity, iterations, status, polished)


def qp_objective(qp, x):
    P = sp.csc_matrix(qp.hessian, dtype=float)
    q = np.asarray(qp.linear, dtype=float).ravel()
    return float(0.5 * x.dot(P.dot(x)) + q.dot(x) + qp.offset)


def _package(qp, x, y, primal, dual, complementarity, iterations, status, polished):
    trajectory = None
    slacks = None
    layout = qp.layout
    if layout is not None:
        n_traj = (layout.K + 1) * (layout.n_x + layout.n_u)
        slacks = x[n_traj:].copy()
        if status in ("solved", "max-iters"):
            trajectory = Trajectory.from_flat(x[:n_traj], layout.n_x, layout.n_u)
    return SubproblemSolution(x, y, trajectory, slacks, qp_objective(qp, x), primal, dual, complementarity,
                              iterations, status, polished, status_num(status))
