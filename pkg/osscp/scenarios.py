#
# Copyright (C) 2026 osscp developers. See LICENSE file for terms.
#
"""
The unicycle benchmark problems: kinematics, quadratic control and terminal costs, circular obstacles, an optional
Gaussian terrain cost field, the initial guess generators, and the registry of named scenarios.
"""
import collections
import copy
import math

import numpy as np

from osscp.constants import CENTER_SAFEGUARD, GUESS_KINDS, GUESS_CLEARANCE, DEFAULT_K, DEFAULT_DT, \
    DEFAULT_SPEED, DEFAULT_START, DEFAULT_GOAL, DEFAULT_TERMINAL_WEIGHT, DEFAULT_U_MAX, DEFAULT_OBSTACLES, \
    TERRAIN_OBSTACLES, TERRAIN_UPPER_AMPLITUDE, TERRAIN_LOWER_AMPLITUDE, TERRAIN_SHAPE, DEFAULT_W1, DEFAULT_W2, \
    DEFAULT_W3, DEFAULT_WP, DEFAULT_RHO, DEFAULT_EPS_C, DEFAULT_OSSCP_EPS_C, DEFAULT_EPS_R, DEFAULT_EPS_S, \
    DEFAULT_SCP_MAX_ITERS, DEFAULT_OSSCP_MAX_ITERS, DEFAULT_MAX_PROJECTION_FAILURES, BENCHMARK_INEQ_PENALTY, \
    REFERENCE_SETTINGS, REFERENCE_OBSTACLE_RADIUS, QP_TOL, QP_MAX_ITER
from osscp.consensus import OsscpConfig
from osscp.errors import ArgumentOutOfRangeError, InvalidConfigError, UnknownScenarioError, UnknownConstantError, \
    OsscpError
from osscp.problem import ProblemDims, ProblemDefinition, CostTerm, ConvexStep, PenaltyWeights
from osscp.scp import ScpConfig
from osscp.trajectory import Trajectory

N_X = 3
N_U = 1


"""UnicycleParams: constant speed v, time step dt, horizon K, start state (x, y, theta), goal state, terminal weight
(a scalar q meaning diag(q, q, 0), or a 3x3 PSD matrix) and the yaw rate bound u_max (None for no bound).
"""
UnicycleParams = collections.namedtuple('UnicycleParams', ['v', 'dt', 'K', 'start', 'goal', 'terminal_weight',
                                                           'u_max'])
UnicycleParams.__new__.__defaults__ = (DEFAULT_TERMINAL_WEIGHT, DEFAULT_U_MAX)


class Obstacle(collections.namedtuple('Obstacle', ['center', 'radius'])):
    """Obstacle: a disc the positions must stay out of, R - ||p - c|| <= 0."""
    __slots__ = ()

    def __new__(cls, center, radius):
        center = tuple(float(c) for c in center)
        if len(center) != 2:
            raise ArgumentOutOfRangeError("obstacle center must be a 2-vector, got %r." % (center,))
        radius = float(radius)
        if not radius > 0:
            raise ArgumentOutOfRangeError("obstacle radius must be positive, got %r." % radius)
        return super(Obstacle, cls).__new__(cls, center, radius)


"""TerrainComponent: center mu, 2x2 shape matrix Sigma (symmetric positive definite) and signed amplitude a of
a * exp(-1/2 (p - mu)' Sigma^-1 (p - mu)).
"""
TerrainComponent = collections.namedtuple('TerrainComponent', ['center', 'shape', 'amplitude'])
TerrainComponent.__new__.__defaults__ = (1.0,)


class TerrainField(object):
    """A sum of signed Gaussian bumps over the plane."""

    def __init__(self, components):
        self.components = tuple(components)
        self._centers = []
        self._inverses = []
        self._amplitudes = []
        for i, component in enumerate(self.components):
            shape = np.asarray(component.shape, dtype=float)
            if shape.shape != (2, 2) or not np.allclose(shape, shape.T):
                raise ArgumentOutOfRangeError("terrain shape matrix %d must be a symmetric 2x2 matrix." % i)
            try:
                np.linalg.cholesky(shape)
            except np.linalg.LinAlgError:
                raise ArgumentOutOfRangeError("terrain shape matrix %d is not positive definite." % i)
            self._centers.append(np.asarray(component.center, dtype=float).reshape(2))
            self._inverses.append(np.linalg.inv(shape))
            self._amplitudes.append(float(component.amplitude))

    @property
    def amplitude_bound(self):
        return float(sum(abs(a) for a in self._amplitudes))

    def value_and_gradient(self, p):
        p = np.asarray(p, dtype=float)
        value = 0.0
        grad = np.zeros(2)
        for mu, inverse, amplitude in zip(self._centers, self._inverses, self._amplitudes):
            d = p - mu
            bump = amplitude * math.exp(-0.5 * d.dot(inverse.dot(d)))
            value += bump
            grad -= bump * inverse.dot(d)
        return value, grad

    def sample(self, xs, ys):
        """Cost on the lattice xs x ys; entry [i, j] is the cost at (xs[j], ys[i])."""
        return np.array([[self.value_and_gradient((x, y))[0] for x in xs] for y in ys])


def terminal_matrix(params):
    weight = np.asarray(params.terminal_weight, dtype=float)
    if weight.ndim == 0:
        return np.diag([float(weight), float(weight), 0.0])
    return weight.reshape(N_X, N_X)


def _full_state(state, what):
    state = [float(s) for s in state]
    if len(state) == 2:
        state.append(0.0)
    if len(state) != N_X:
        raise ArgumentOutOfRangeError("%s must have 2 or 3 entries, got %d." % (what, len(state)))
    return tuple(state)


def validate_params(params):
    if not params.v > 0:
        raise ArgumentOutOfRangeError("speed v must be positive, got %r." % (params.v,))
    if not params.dt > 0:
        raise ArgumentOutOfRangeError("time step dt must be positive, got %r." % (params.dt,))
    if int(params.K) != params.K or params.K < 1:
        raise ArgumentOutOfRangeError("horizon K must be an integer >= 1, got %r." % (params.K,))
    if params.u_max is not None and not params.u_max > 0:
        raise ArgumentOutOfRangeError("yaw rate bound must be positive, got %r." % (params.u_max,))
    Q = terminal_matrix(params)
    if not np.allclose(Q, Q.T) or np.min(np.linalg.eigvalsh(Q)) < -1e-12:
        raise ArgumentOutOfRangeError("terminal weight must be symmetric positive semidefinite.")
    return params._replace(K=int(params.K), start=_full_state(params.start, "start"),
                           goal=_full_state(params.goal, "goal"))


def unicycle_dynamics(params, k, z_k):
    """Forward Euler unicycle step at constant speed. returns: (x_{k+1}, jacobian of shape (3, 4))."""
    x, y, theta, u = z_k
    v, dt = params.v, params.dt
    c, s = math.cos(theta), math.sin(theta)
    x_next = np.array([x + v * c * dt, y + v * s * dt, theta + u * dt])
    jac = np.array([[1.0, 0.0, -v * s * dt, 0.0],
                    [0.0, 1.0, v * c * dt, 0.0],
                    [0.0, 0.0, 1.0, dt]])
    return x_next, jac


def obstacle_constraint(obs, z_k):
    """g = R - ||p - c|| with its gradient over z_k; at the center the gradient points along -x."""
    grad = np.zeros(len(z_k))
    d = np.asarray(z_k[:2], dtype=float) - np.asarray(obs.center)
    distance = float(np.linalg.norm(d))
    direction = d / distance if distance >= CENTER_SAFEGUARD else np.array([1.0, 0.0])
    grad[:2] = -direction
    return obs.radius - distance, grad


def terrain_cost(field, z_k):
    """Terrain cost at the position of z_k with its gradient over z_k."""
    value, grad_p = field.value_and_gradient(z_k[:2])
    grad = np.zeros(len(z_k))
    grad[:2] = grad_p
    return value, grad


def _control_effort(k, z_k):
    u = z_k[N_X:]
    grad = np.zeros(N_X + N_U)
    grad[N_X:] = 2.0 * u
    hess = np.zeros((N_X + N_U, N_X + N_U))
    hess[N_X:, N_X:] = 2.0 * np.eye(N_U)
    return float(u.dot(u)), grad, hess


def _terminal_cost(params):
    Q = terminal_matrix(params)
    goal = np.asarray(params.goal, dtype=float)

    def evaluate(k, z_k):
        e = z_k[:N_X] - goal
        grad = np.zeros(N_X + N_U)
        grad[:N_X] = 2.0 * Q.dot(e)
        hess = np.zeros((N_X + N_U, N_X + N_U))
        hess[:N_X, :N_X] = 2.0 * Q
        return float(e.dot(Q.dot(e))), grad, hess
    return evaluate


def build_problem(params, obstacles=(), terrain=None):
    """The unicycle ProblemDefinition: fixed initial state, yaw rate bounds, one inequality per obstacle."""
    params = validate_params(params)
    obstacles = tuple(obstacles)
    dims = ProblemDims(N_X, N_U, params.K, len(obstacles), 0)

    def dynamics(k, z_k):
        return unicycle_dynamics(params, k, z_k)

    def ineq(z_k):
        rows = [obstacle_constraint(obs, z_k) for obs in obstacles]
        return np.array([r[0] for r in rows]), np.array([r[1] for r in rows])

    u_max = np.inf if params.u_max is None else float(params.u_max)
    lower = np.array([-np.inf] * N_X + [-u_max] * N_U)
    upper = np.array([np.inf] * N_X + [u_max] * N_U)
    fixed = np.hstack([np.eye(N_X), np.zeros((N_X, N_U))])

    def convex_set(k):
        if k == 0:
            return ConvexStep(lower, upper, fixed, np.asarray(params.start))
        return ConvexStep(lower, upper)

    terms = [CostTerm('control-effort', _control_effort, True, 'running'),
             CostTerm('terminal', _terminal_cost(params), True, 'terminal')]
    if terrain is not None:
        terms.append(CostTerm('terrain', lambda k, z_k: terrain_cost(terrain, z_k) + (None,), False, 'running'))
    return ProblemDefinition(dims, dynamics, terms, convex_set=convex_set, ineq=ineq if obstacles else None,
                             name="unicycle")


def _from_path(positions, headings, params):
    headings = np.unwrap(np.asarray(headings, dtype=float))
    controls = np.diff(headings) / params.dt
    states = np.column_stack([positions, headings])
    return Trajectory.from_parts(states, controls.reshape(-1, 1))


def _chord(params):
    start = np.asarray(params.start[:2], dtype=float)
    goal = np.asarray(params.goal[:2], dtype=float)
    length = float(np.linalg.norm(goal - start))
    if length < 1e-12:
        return start, goal, 0.0, np.array([1.0, 0.0]), np.array([0.0, 1.0])
    direction = (goal - start) / length
    return start, goal, length, direction, np.array([-direction[1], direction[0]])


def _straight(params):
    start, goal, length, direction, _ = _chord(params)
    s = np.linspace(0.0, 1.0, params.K + 1)
    positions = start + np.outer(s, goal - start)
    heading = math.atan2(direction[1], direction[0]) if length > 0 else params.start[2]
    return _from_path(positions, np.full(params.K + 1, heading), params)


def _arc(params, offset):
    """Circular arc from start to goal through the point `offset` along the chord normal from the chord midpoint."""
    start, goal, length, direction, normal = _chord(params)
    half = 0.5 * length
    middle = 0.5 * (start + goal)
    center_offset = (offset ** 2 - half ** 2) / (2.0 * offset)
    center = middle + center_offset * normal
    radius = (offset ** 2 + half ** 2) / (2.0 * abs(offset))
    toward = math.copysign(1.0, offset) * normal
    beta_max = math.atan2(half, (middle - center).dot(toward))
    beta = np.linspace(-beta_max, beta_max, params.K + 1)
    positions = center + radius * (np.outer(np.cos(beta), toward) + np.outer(np.sin(beta), direction))
    tangents = np.outer(-np.sin(beta), toward) + np.outer(np.cos(beta), direction)
    return _from_path(positions, np.arctan2(tangents[:, 1], tangents[:, 0]), params)


def _arc_clearance(params, obstacles, side):
    """Offset along side * normal that clears the far edge of every obstacle; side is +1 (over) or -1 (under)."""
    start, goal, length, _, normal = _chord(params)
    middle = 0.5 * (start + goal)
    if not obstacles:
        return 0.5 * length
    reach = max(side * (np.asarray(o.center) - middle).dot(normal) + o.radius for o in obstacles)
    return max(reach, 0.0) + GUESS_CLEARANCE


def corridor_midpoints(obstacles):
    """Midpoints of the gaps between vertically consecutive obstacles, lowest gap first."""
    ordered = sorted(obstacles, key=lambda o: o.center[1])
    midpoints = []
    for below, above in zip(ordered[:-1], ordered[1:]):
        y = 0.5 * ((below.center[1] + below.radius) + (above.center[1] - above.radius))
        midpoints.append((0.5 * (below.center[0] + above.center[0]), y))
    return midpoints


def make_waypoint_guess(waypoints, params):
    """Piecewise linear path start -> waypoints -> goal, resampled evenly by arc length, headings along segments."""
    params = validate_params(params)
    path = [tuple(params.start[:2])] + [tuple(float(c) for c in w) for w in waypoints] + [tuple(params.goal[:2])]
    for w in path:
        if len(w) != 2:
            raise ArgumentOutOfRangeError("waypoints must be 2-vectors, got %r." % (w,))
    points = [np.asarray(path[0])]
    for w in path[1:]:
        if np.linalg.norm(np.asarray(w) - points[-1]) > 1e-12:
            points.append(np.asarray(w))
    if len(points) < 2:
        return _straight(params)
    points = np.array(points)
    segments = np.diff(points, axis=0)
    lengths = np.linalg.norm(segments, axis=1)
    cumulative = np.concatenate([[0.0], np.cumsum(lengths)])
    s = np.linspace(0.0, cumulative[-1], params.K + 1)
    positions = np.column_stack([np.interp(s, cumulative, points[:, 0]), np.interp(s, cumulative, points[:, 1])])
    index = np.clip(np.searchsorted(cumulative, s, side='right') - 1, 0, len(segments) - 1)
    headings = np.arctan2(segments[index, 1], segments[index, 0])
    return _from_path(positions, headings, params)


def canonical_guess_kind(kind):
    try:
        index = GUESS_KINDS[kind]
    except (KeyError, TypeError):
        raise UnknownConstantError("%r is not a known guess kind." % (kind,))
    return ("over", "straight", "under", "lower-corridor")[index]


def make_guess(kind, params, obstacles=(), terrain=None):
    """
    Initial guess of the given kind: 'over' / 'under' arcs passing outside every obstacle on their side, the 'straight'
    start-goal segment, or a 'lower-corridor' path through the most negative terrain bump (the lowest obstacle gap
    without terrain). Guesses need not be dynamically feasible.
    """
    kind = canonical_guess_kind(kind)
    params = validate_params(params)
    obstacles = tuple(obstacles)
    if kind == "straight" or _chord(params)[2] == 0.0:
        return _straight(params)
    if kind in ("over", "under"):
        side = 1.0 if kind == "over" else -1.0
        return _arc(params, side * _arc_clearance(params, obstacles, side))
    waypoint = None
    if terrain is not None:
        lowest = min(terrain.components, key=lambda c: c.amplitude)
        if lowest.amplitude < 0:
            waypoint = tuple(lowest.center)
    if waypoint is None:
        gaps = corridor_midpoints(obstacles)
        if gaps:
            waypoint = gaps[0]
        else:
            start, goal, length, _, normal = _chord(params)
            waypoint = tuple(0.5 * (start + goal) - 0.25 * length * normal)
    return make_waypoint_guess([waypoint], params)


def homotopy_labels(count):
    if count == 3:
        return ["under", "lower-corridor", "upper-corridor", "over"]
    return ["under"] + ["corridor-%d" % i for i in range(1, count)] + ["over"]


def homotopy_class(trajectory, obstacles):
    """
    Which side of / which gap between a column of obstacles the trajectory passes, judged by its lateral position
    where it crosses the obstacles' mean x (or where it gets closest to it).
    """
    obstacles = tuple(obstacles)
    if not obstacles:
        return "free"
    column = float(np.mean([o.center[0] for o in obstacles]))
    xs = trajectory.states[:, 0]
    ys = trajectory.states[:, 1]
    crossing = None
    for k in range(len(xs) - 1):
        if (xs[k] - column) * (xs[k + 1] - column) <= 0 and xs[k] != xs[k + 1]:
            w = (column - xs[k]) / (xs[k + 1] - xs[k])
            crossing = ys[k] + w * (ys[k + 1] - ys[k])
            break
    if crossing is None:
        crossing = ys[int(np.argmin(np.abs(xs - column)))]
    centers = sorted(o.center[1] for o in obstacles)
    return homotopy_labels(len(centers))[int(np.sum(np.asarray(centers) < crossing))]


def mirror_trajectory(trajectory, start, goal):
    """Reflection across the line through the start and goal positions (headings and yaw rates flip)."""
    start = np.asarray(start[:2], dtype=float)
    goal = np.asarray(goal[:2], dtype=float)
    phi = math.atan2(goal[1] - start[1], goal[0] - start[0])
    reflect = np.array([[math.cos(2 * phi), math.sin(2 * phi)], [math.sin(2 * phi), -math.cos(2 * phi)]])
    points = np.array(trajectory.points)
    points[:, :2] = start + (points[:, :2] - start).dot(reflect.T)
    points[:, 2] = 2 * phi - points[:, 2]
    points[:, 3:] = -points[:, 3:]
    return trajectory.with_points(points)


def default_terrain(obstacles):
    """A costly Gaussian centered in the top gap and a rewarding one centered in the bottom gap."""
    gaps = corridor_midpoints(obstacles)
    if len(gaps) < 2:
        raise ArgumentOutOfRangeError("the default terrain needs two obstacle gaps, got %d." % len(gaps))
    return [{"center": list(gaps[-1]), "shape": [list(r) for r in TERRAIN_SHAPE], "amplitude": TERRAIN_UPPER_AMPLITUDE},
            {"center": list(gaps[0]), "shape": [list(r) for r in TERRAIN_SHAPE], "amplitude": TERRAIN_LOWER_AMPLITUDE}]


"""ScenarioSpec: registry entry of a named benchmark with its default obstacles as (cx, cy, R) rows.
"""
ScenarioSpec = collections.namedtuple('ScenarioSpec', ['description', 'terrain', 'guesses', 'obstacles'])

SCENARIOS = collections.OrderedDict([
    ("unicycle-basic", ScenarioSpec("unicycle between three obstacles forming an upper and a lower corridor",
                                    False, ("over", "straight", "under"), DEFAULT_OBSTACLES)),
    ("unicycle-terrain", ScenarioSpec("unicycle with a larger bottom obstacle, a costly upper corridor and a "
                                      "rewarding lower corridor", True, ("over", "straight", "under"),
                                      TERRAIN_OBSTACLES)),
])

SCENARIO_KEYS = ("v", "dt", "K", "start", "goal", "terminal_weight", "u_max", "obstacles", "terrain")
SOLVER_KEYS = ("w1", "w2", "w3", "wp", "rho", "eps_c", "osscp_eps_c", "eps_r", "eps_s", "scp_max_iters",
               "osscp_max_iters", "tol", "qp_max_iter", "ineq_penalty", "consensus_mask", "max_workers",
               "max_projection_failures")


"""Scenario: an assembled benchmark. guesses is a list of (name, Trajectory); settings echoes every parameter.
"""
Scenario = collections.namedtuple('Scenario', ['name', 'problem', 'params', 'obstacles', 'terrain', 'guesses',
                                               'scp_config', 'osscp_config', 'settings'])


def list_scenarios():
    return list(SCENARIOS.keys())


def find_scenario(name):
    try:
        return SCENARIOS[name]
    except KeyError:
        raise UnknownScenarioError("unknown scenario %r (known: %s)." % (name, ", ".join(SCENARIOS)))


def default_overrides(name):
    """returns: (scenario settings, solver settings) of a named scenario as plain JSON values."""
    spec = find_scenario(name)
    obstacles = [list(o) for o in spec.obstacles]
    scenario = {
        "v": DEFAULT_SPEED,
        "dt": DEFAULT_DT,
        "K": DEFAULT_K,
        "start": list(DEFAULT_START),
        "goal": list(DEFAULT_GOAL),
        "terminal_weight": DEFAULT_TERMINAL_WEIGHT,
        "u_max": DEFAULT_U_MAX,
        "obstacles": obstacles,
        "terrain": default_terrain([Obstacle(o[:2], o[2]) for o in obstacles]) if spec.terrain else None,
    }
    solver = {
        "w1": DEFAULT_W1,
        "w2": DEFAULT_W2,
        "w3": DEFAULT_W3,
        "wp": DEFAULT_WP,
        "rho": DEFAULT_RHO,
        "eps_c": DEFAULT_EPS_C,
        "osscp_eps_c": DEFAULT_OSSCP_EPS_C,
        "eps_r": DEFAULT_EPS_R,
        "eps_s": DEFAULT_EPS_S,
        "scp_max_iters": DEFAULT_SCP_MAX_ITERS,
        "osscp_max_iters": DEFAULT_OSSCP_MAX_ITERS,
        "tol": QP_TOL,
        "qp_max_iter": QP_MAX_ITER,
        "ineq_penalty": BENCHMARK_INEQ_PENALTY,
        "consensus_mask": None,
        "max_workers": None,
        "max_projection_failures": DEFAULT_MAX_PROJECTION_FAILURES,
    }
    return scenario, solver


def check_override_keys(overrides, allowed, what):
    for key in overrides or {}:
        if key not in allowed:
            raise InvalidConfigError("unknown %s override %r." % (what, key))


def _parse_obstacles(value):
    return tuple(Obstacle(entry[:2], entry[2]) for entry in value)


def _parse_terrain(value):
    if not value:
        return None
    components = []
    for entry in value:
        unknown = set(entry) - {"center", "shape", "amplitude"}
        if unknown:
            raise InvalidConfigError("unknown terrain key %r." % sorted(unknown)[0])
        components.append(TerrainComponent(tuple(entry["center"]), entry["shape"], entry.get("amplitude", 1.0)))
    return TerrainField(components)


def build_scenario(name, overrides=None, solver_overrides=None):
    """
    Assemble a named scenario with optional overrides of its scenario and solver settings.

    returns: Scenario with the problem, default guesses and default SCP / OS-SCP configurations.
    """
    spec = find_scenario(name)
    check_override_keys(overrides, SCENARIO_KEYS, "scenario")
    check_override_keys(solver_overrides, SOLVER_KEYS, "solver")
    scenario_settings, solver_settings = default_overrides(name)
    scenario_settings.update(copy.deepcopy(overrides or {}))
    solver_settings.update(copy.deepcopy(solver_overrides or {}))
    s = scenario_settings
    o = solver_settings
    try:
        params = validate_params(UnicycleParams(float(s["v"]), float(s["dt"]), s["K"], tuple(s["start"]),
                                                tuple(s["goal"]), s["terminal_weight"],
                                                None if s["u_max"] is None else float(s["u_max"])))
        obstacles = _parse_obstacles(s["obstacles"])
        if spec.terrain and "terrain" not in (overrides or {}):
            s["terrain"] = default_terrain(obstacles)
        terrain = _parse_terrain(s["terrain"])
        weights = PenaltyWeights(float(o["w1"]), float(o["w2"]), float(o["w3"]), float(o["wp"]), o["ineq_penalty"])
        scp_config = ScpConfig(weights, float(o["eps_c"]), int(o["scp_max_iters"]), float(o["tol"]),
                               int(o["qp_max_iter"]))
        osscp_config = OsscpConfig(float(o["rho"]), float(o["eps_r"]), float(o["eps_s"]), float(o["osscp_eps_c"]),
                                   int(o["osscp_max_iters"]), weights, float(o["tol"]), int(o["qp_max_iter"]),
                                   o["consensus_mask"], int(o["max_projection_failures"]), o["max_workers"])
    except OsscpError:
        raise
    except (TypeError, ValueError, KeyError, IndexError) as e:
        raise InvalidConfigError("invalid setting for scenario %s: %s" % (name, e))
    problem = build_problem(params, obstacles, terrain)
    guesses = [(kind, make_guess(kind, params, obstacles, terrain)) for kind in spec.guesses]
    settings = dict(scenario_settings)
    settings.update(solver_settings)
    return Scenario(name, problem, params, obstacles, terrain, guesses, scp_config, osscp_config, settings)


def reference_deviations(settings):
    """
    Settings that differ from the documented reference values.

    returns: {name: {"value": ..., "reference": ...}}, obstacle radii keyed as "obstacles[i].radius".
    """
    deviations = collections.OrderedDict()
    for key in sorted(REFERENCE_SETTINGS):
        reference = REFERENCE_SETTINGS[key]
        if key not in settings:
            continue
        value = settings[key]
        if np.shape(value) != np.shape(reference) or not np.allclose(value, reference, rtol=1e-12, atol=0.0):
            deviations[key] = {"value": value, "reference": reference}
    for i, entry in enumerate(settings.get("obstacles") or ()):
        if float(entry[2]) != REFERENCE_OBSTACLE_RADIUS:
            deviations["obstacles[%d].radius" % i] = {"value": entry[2], "reference": REFERENCE_OBSTACLE_RADIUS}
    return deviations
