#
# Copyright (C) 2026 osscp developers. See LICENSE file for terms.
#
"""
The discrete-time optimal control problem (dynamics, costs, nonconvex constraints and per-step convex sets), its
first-order model about a reference trajectory, and the penalized costs built from both.
"""
import collections
import functools

import numpy as np

from osscp.constants import INEQ_PENALTIES, STAGES
from osscp.errors import DimensionMismatchError, NonFiniteValueError, ArgumentOutOfRangeError, UnknownConstantError
from osscp.functions import finite_difference_jacobian
from osscp.trajectory import Trajectory


class ProblemDims(collections.namedtuple('ProblemDims', ['n_x', 'n_u', 'K', 'n_g', 'n_h'])):
    """ProblemDims: state, control and constraint counts, plus the number of control intervals K."""
    __slots__ = ()

    @property
    def n_z(self):
        return self.n_x + self.n_u


"""CostTerm: one additive cost. evaluate(k, z_k) returns (value, gradient, hessian). Convex terms must be quadratic
and return their constant Hessian; they reach the subproblem exactly. Nonconvex terms may return None for the Hessian
and are linearized. stage is 'running' (k = 0 ... K-1) or 'terminal' (k = K).
"""
CostTerm = collections.namedtuple('CostTerm', ['name', 'evaluate', 'convex', 'stage'])


"""ConvexStep: the convex set Z^c_k for one step, lower <= z_k <= upper and eq_matrix z_k = eq_rhs.
"""
ConvexStep = collections.namedtuple('ConvexStep', ['lower', 'upper', 'eq_matrix', 'eq_rhs'])
ConvexStep.__new__.__defaults__ = (None, None)


"""PenaltyWeights: w1 (dynamics defects), w2 (inequalities), w3 (equalities), wp (proximal term).
ineq_penalty selects |g| ('abs') or max(g, 0) ('positive') for the inequality penalty.
"""
PenaltyWeights = collections.namedtuple('PenaltyWeights', ['w1', 'w2', 'w3', 'wp', 'ineq_penalty'])
PenaltyWeights.__new__.__defaults__ = ('abs',)


"""PenalizedCost: finite part of the penalized cost, and whether z lies in Z^c (the indicator term).
"""
PenalizedCost = collections.namedtuple('PenalizedCost', ['value', 'in_convex_set'])


def ineq_penalty_mode(weights):
    """Canonical name ('abs' or 'positive') of the inequality penalty."""
    try:
        index = INEQ_PENALTIES[weights.ineq_penalty]
    except KeyError:
        raise UnknownConstantError("%s is not a known inequality penalty." % (weights.ineq_penalty,))
    return ("abs", "positive")[index]


def validate_weights(weights, for_solve=False):
    """All weights nonnegative; w1, w2, w3 strictly positive when for_solve is set."""
    for name in ('w1', 'w2', 'w3', 'wp'):
        value = getattr(weights, name)
        if not np.isfinite(value) or value < 0:
            raise ArgumentOutOfRangeError("penalty weight %s must be nonnegative and finite, got %r." % (name, value))
        if for_solve and name != 'wp' and value <= 0:
            raise ArgumentOutOfRangeError("penalty weight %s must be strictly positive in a solve, got %r." % (name, value))
    ineq_penalty_mode(weights)
    return weights


def _trajectories_in(value):
    if isinstance(value, Trajectory):
        return [value]
    if isinstance(value, (list, tuple)):
        return [v for v in value if isinstance(v, Trajectory)]
    return []


def requires_matching_dims(error_message="Trajectory of shape %s (n_x = %d) does not match problem dims %s."):
    """Check every Trajectory argument (or list of them) against owner.dims before calling."""
    def check_dims_decorator(method):
        @functools.wraps(method)
        def check_dims_impl(owner, *args, **kwargs):
            dims = owner.dims
            for value in list(args) + list(kwargs.values()):
                for traj in _trajectories_in(value):
                    if traj.shape != (dims.K + 1, dims.n_z) or traj.n_x != dims.n_x:
                        raise DimensionMismatchError(error_message % (traj.shape, traj.n_x, tuple(dims)))
            return method(owner, *args, **kwargs)
        return check_dims_impl
    return check_dims_decorator


def _as_vector(value, size, what):
    vector = np.asarray(value, dtype=float)
    if vector.ndim == 0:
        vector = np.full(size, float(vector))
    vector = vector.reshape(-1)
    if vector.size != size:
        raise DimensionMismatchError("%s has %d entries, expected %d." % (what, vector.size, size))
    return vector


def _as_matrix(value, shape, what):
    matrix = np.asarray(value, dtype=float)
    if matrix.size == 0 and shape[0] == 0:
        return np.zeros(shape)
    if matrix.shape != shape:
        raise DimensionMismatchError("%s has shape %s, expected %s." % (what, matrix.shape, shape))
    return matrix


def _check_finite(values, what):
    if not np.all(np.isfinite(values)):
        raise NonFiniteValueError("%s returned non-finite values." % what)
    return values


class ProblemDefinition(object):
    """
    A nonconvex optimal control problem over z_0 ... z_K.

    dynamics(k, z_k) -> (x_{k+1}, jacobian of shape (n_x, n_z))
    ineq(z_k) -> (g values, jacobian of shape (n_g, n_z)), constrained g <= 0 at every k = 0 ... K
    eq(z_k) -> (h values, jacobian of shape (n_h, n_z)), constrained h = 0 at every k = 0 ... K
    convex_set(k) -> ConvexStep
    A callback may return None in place of its jacobian; central differences are used instead.
    """

    def __init__(self, dims, dynamics, cost_terms, convex_set=None, ineq=None, eq=None, name=None):
        if dims.K < 1 or dims.n_x < 1 or dims.n_u < 0 or dims.n_g < 0 or dims.n_h < 0:
            raise ArgumentOutOfRangeError("invalid problem dims %s." % (tuple(dims),))
        if dims.n_g > 0 and ineq is None:
            raise ArgumentOutOfRangeError("n_g = %d but no inequality callback was given." % dims.n_g)
        if dims.n_h > 0 and eq is None:
            raise ArgumentOutOfRangeError("n_h = %d but no equality callback was given." % dims.n_h)
        for term in cost_terms:
            if term.stage not in STAGES:
                raise UnknownConstantError("%s is not a known cost stage (term %s)." % (term.stage, term.name))
        self.dims = dims
        self.name = name
        self._dynamics = dynamics
        self._ineq = ineq
        self._eq = eq
        self.cost_terms = tuple(cost_terms)
        self.convex_steps = tuple(self._convex_step(convex_set, k) for k in range(dims.K + 1))

    def _convex_step(self, convex_set, k):
        n_z = self.dims.n_z
        step = convex_set(k) if convex_set is not None else ConvexStep(-np.inf, np.inf)
        lower = _as_vector(step.lower, n_z, "Z^c_%d lower bound" % k)
        upper = _as_vector(step.upper, n_z, "Z^c_%d upper bound" % k)
        if np.any(lower > upper):
            raise ArgumentOutOfRangeError("Z^c_%d is empty: lower bound exceeds upper bound." % k)
        if step.eq_matrix is None:
            eq_matrix = np.zeros((0, n_z))
            eq_rhs = np.zeros(0)
        else:
            eq_matrix = np.atleast_2d(np.asarray(step.eq_matrix, dtype=float))
            eq_rhs = _as_vector(step.eq_rhs, eq_matrix.shape[0], "Z^c_%d equality right hand side" % k)
            eq_matrix = _as_matrix(eq_matrix, (eq_rhs.size, n_z), "Z^c_%d equality matrix" % k)
            if eq_rhs.size:
                particular = np.linalg.lstsq(eq_matrix, eq_rhs, rcond=None)[0]
                if np.max(np.abs(eq_matrix.dot(particular) - eq_rhs)) > 1e-9 * max(1.0, np.max(np.abs(eq_rhs))):
                    raise ArgumentOutOfRangeError("Z^c_%d is empty: inconsistent equality rows." % k)
        return ConvexStep(lower, upper, eq_matrix, eq_rhs)

    def dynamics(self, k, z_k):
        """x_{k+1} and its Jacobian; a callback returning None for the Jacobian gets central differences."""
        x_next, jac = self._dynamics(k, z_k)
        x_next = _check_finite(_as_vector(x_next, self.dims.n_x, "dynamics value"), "dynamics at step %d" % k)
        if jac is None:
            jac = finite_difference_jacobian(lambda z: self._dynamics(k, z)[0], z_k)
        jac = _check_finite(_as_matrix(jac, (self.dims.n_x, self.dims.n_z), "dynamics jacobian"),
                            "dynamics jacobian at step %d" % k)
        return x_next, jac

    def ineq(self, z_k):
        return self._constraint(self._ineq, self.dims.n_g, z_k, "inequality")

    def eq(self, z_k):
        return self._constraint(self._eq, self.dims.n_h, z_k, "equality")

    def _constraint(self, callback, count, z_k, what):
        if count == 0:
            return np.zeros(0), np.zeros((0, self.dims.n_z))
        values, jac = callback(z_k)
        values = _check_finite(_as_vector(values, count, "%s value" % what), what)
        if jac is None:
            jac = finite_difference_jacobian(lambda z: np.reshape(callback(z)[0], count), z_k)
        jac = _check_finite(_as_matrix(jac, (count, self.dims.n_z), "%s jacobian" % what), "%s jacobian" % what)
        return values, jac

    def stage_terms(self, k):
        stage = "terminal" if k == self.dims.K else "running"
        return [term for term in self.cost_terms if term.stage == stage]

    def stage_cost(self, k, z_k):
        """Cost value at step k, together with the gradient and the Hessian of its convex part."""
        n_z = self.dims.n_z
        value = 0.0
        grad = np.zeros(n_z)
        hess = np.zeros((n_z, n_z))
        for term in self.stage_terms(k):
            v, g, h = term.evaluate(k, z_k)
            value += float(_check_finite(np.asarray(v, dtype=float), "cost term %s" % term.name))
            grad += _check_finite(_as_vector(g, n_z, "gradient of %s" % term.name), "cost term %s" % term.name)
            if term.convex:
                if h is None:
                    raise ArgumentOutOfRangeError("convex cost term %s must supply its Hessian." % term.name)
                hess += _as_matrix(h, (n_z, n_z), "Hessian of %s" % term.name)
        return value, grad, hess


class LinearizedProblem(object):
    """First-order data of every callback at a reference trajectory.

    Convex cost terms keep their Hessian, so cost_model is their exact value; everything else is affine."""

    def __init__(self, dims, reference, dyn_values, dyn_jacobians, ineq_values, ineq_jacobians,
                 eq_values, eq_jacobians, cost_values, cost_gradients, cost_hessians, convex_steps):
        self.dims = dims
        self.reference = reference
        self.dyn_values = dyn_values
        self.dyn_jacobians = dyn_jacobians
        self.ineq_values = ineq_values
        self.ineq_jacobians = ineq_jacobians
        self.eq_values = eq_values
        self.eq_jacobians = eq_jacobians
        self.cost_values = cost_values
        self.cost_gradients = cost_gradients
        self.cost_hessians = cost_hessians
        self.convex_steps = convex_steps

    def _offset(self, k, z_k):
        return np.asarray(z_k, dtype=float) - self.reference.points[k]

    def dynamics_model(self, k, z_k):
        return self.dyn_values[k] + self.dyn_jacobians[k].dot(self._offset(k, z_k))

    def ineq_model(self, k, z_k):
        return self.ineq_values[k] + self.ineq_jacobians[k].dot(self._offset(k, z_k))

    def eq_model(self, k, z_k):
        return self.eq_values[k] + self.eq_jacobians[k].dot(self._offset(k, z_k))

    def cost_model(self, k, z_k):
        d = self._offset(k, z_k)
        return float(self.cost_values[k] + self.cost_gradients[k].dot(d) + 0.5 * d.dot(self.cost_hessians[k].dot(d)))


@requires_matching_dims()
def linearize(problem, ref):
    """Evaluate dynamics, constraints and costs with their derivatives at ref."""
    dims = problem.dims
    K, n_x, n_z = dims.K, dims.n_x, dims.n_z
    points = ref.points
    dyn_values = np.zeros((K, n_x))
    dyn_jacobians = np.zeros((K, n_x, n_z))
    for k in range(K):
        dyn_values[k], dyn_jacobians[k] = problem.dynamics(k, points[k])
    ineq_values = np.zeros((K + 1, dims.n_g))
    ineq_jacobians = np.zeros((K + 1, dims.n_g, n_z))
    eq_values = np.zeros((K + 1, dims.n_h))
    eq_jacobians = np.zeros((K + 1, dims.n_h, n_z))
    cost_values = np.zeros(K + 1)
    cost_gradients = np.zeros((K + 1, n_z))
    cost_hessians = np.zeros((K + 1, n_z, n_z))
    for k in range(K + 1):
        ineq_values[k], ineq_jacobians[k] = problem.ineq(points[k])
        eq_values[k], eq_jacobians[k] = problem.eq(points[k])
        cost_values[k], cost_gradients[k], cost_hessians[k] = problem.stage_cost(k, points[k])
    return LinearizedProblem(dims, ref, dyn_values, dyn_jacobians, ineq_values, ineq_jacobians,
                             eq_values, eq_jacobians, cost_values, cost_gradients, cost_hessians,
                             problem.convex_steps)


def convex_set_violation(convex_steps, z):
    """Largest violation of the bounds and equality rows of Z^c by z (0 when z is inside)."""
    worst = 0.0
    for k, step in enumerate(convex_steps):
        z_k = z.points[k]
        worst = max(worst, float(np.max(np.maximum(step.lower - z_k, 0.0))),
                    float(np.max(np.maximum(z_k - step.upper, 0.0))))
        if step.eq_rhs.size:
            worst = max(worst, float(np.max(np.abs(step.eq_matrix.dot(z_k) - step.eq_rhs))))
    return worst


def _penalized_sum(weights, cost, defects, ineq_values, eq_values):
    if ineq_penalty_mode(weights) == "positive":
        ineq_term = float(np.sum(np.maximum(ineq_values, 0.0)))
    else:
        ineq_term = float(np.sum(np.abs(ineq_values)))
    return (cost + weights.w1 * float(np.sum(np.abs(defects))) + weights.w2 * ineq_term
            + weights.w3 * float(np.sum(np.abs(eq_values))))


@requires_matching_dims()
def penalized_linear_cost(lin, weights, z, tol=1e-6):
    """
    The linearized penalized cost of z about lin.reference.

    returns: PenalizedCost(value, in_convex_set). value holds the finite terms only; in_convex_set stands in for
    the indicator of Z^c (membership within tol).
    """
    K = lin.dims.K
    points = z.points
    n_x = lin.dims.n_x
    cost = sum(lin.cost_model(k, points[k]) for k in range(K + 1))
    defects = np.array([points[k + 1, :n_x] - lin.dynamics_model(k, points[k]) for k in range(K)])
    ineq_values = np.array([lin.ineq_model(k, points[k]) for k in range(K + 1)])
    eq_values = np.array([lin.eq_model(k, points[k]) for k in range(K + 1)])
    value = _penalized_sum(weights, cost, defects, ineq_values, eq_values)
    return PenalizedCost(value, convex_set_violation(lin.convex_steps, z) <= tol)


@requires_matching_dims()
def true_penalized_cost(problem, weights, z):
    """The penalized cost of z using the nonlinear dynamics and constraints."""
    K = problem.dims.K
    n_x = problem.dims.n_x
    points = z.points
    cost = sum(problem.stage_cost(k, points[k])[0] for k in range(K + 1))
    defects = np.array([points[k + 1, :n_x] - problem.dynamics(k, points[k])[0] for k in range(K)])
    ineq_values = np.array([problem.ineq(points[k])[0] for k in range(K + 1)])
    eq_values = np.array([problem.eq(points[k])[0] for k in range(K + 1)])
    return _penalized_sum(weights, cost, defects, ineq_values, eq_values)
