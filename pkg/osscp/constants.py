#
# Copyright (C) 2026 osscp developers. See LICENSE file for terms.
#
"""
Status codes, enumerations and default numeric settings shared by the solvers, the scenarios and the command line
front end. Defaults here are the values a run uses when neither the scenario nor the config file overrides them.
"""
from osscp.errors import UnknownConstantError


def status_tag(number):
    """Get the status name for a given SOLVER_STATUS value."""
    try:
        return SOLVER_STATUS_LOOKUP[number]
    except KeyError:
        raise UnknownConstantError("%s is not a known SOLVER_STATUS value." % number)


def status_num(tag):
    """Resolve the numerical code associated with a SOLVER_STATUS name."""
    try:
        return SOLVER_STATUS[tag]
    except KeyError:
        raise UnknownConstantError("%s is not a known SOLVER_STATUS name." % tag)


def make_enum(members):
    """Members with no specific values are numbered 0, 1, 2... in the order given."""
    enum = {}
    for i, member in enumerate(members):
        keys = [member]
        if isinstance(member, tuple):
            # this member has multiple names!
            keys = member
        for key in keys:
            enum[key] = i
    return enum


SOLVER_STATUS = {
    "solved": 0,
    "max-iters": 1,
    "infeasible": 2,
    "unbounded": 3,
}

SOLVER_STATUS_LOOKUP = {v: k for k, v in SOLVER_STATUS.items()}

# statuses an engine may continue from. max-iters carries the best iterate.
USABLE_STATUSES = ("solved", "max-iters")

METHODS = make_enum([
    "scp",
    "osscp",
    "both",
])

GUESS_KINDS = make_enum([
    ("over", "upper"),
    "straight",
    ("under", "lower"),
    "lower-corridor",
])

INEQ_PENALTIES = make_enum([
    ("abs", "absolute"),
    ("positive", "positive-part"),
])

STAGES = make_enum([
    "running",
    "terminal",
])

# quadratic program solver.
QP_TOL = 1e-8
QP_MAX_ITER = 20000
QP_SIGMA = 1e-6
QP_ALPHA = 1.6
QP_RHO = 0.1
QP_RHO_MIN = 1e-6
QP_RHO_MAX = 1e6
QP_RHO_EQ_SCALE = 1e3
QP_RHO_ADAPT_RATIO = 5.0
QP_CHECK_INTERVAL = 25
QP_SCALING_ITER = 10
QP_SCALING_MIN = 1e-4
QP_SCALING_MAX = 1e4
QP_INFEASIBILITY_TOL = 1e-5
QP_POLISH_DELTA = 1e-6
QP_POLISH_REFINE_ITER = 3
QP_POLISH_GATE = 1e-3

# prox-linear descent is checked with this slack per iteration.
DESCENT_SLACK = 1e-6

# obstacle gradient is replaced by a fixed direction closer than this to the center.
CENTER_SAFEGUARD = 1e-9

# benchmark scenario defaults.
DEFAULT_K = 40
DEFAULT_DT = 0.25
DEFAULT_SPEED = 1.0
DEFAULT_START = (0.0, 0.0, 0.0)
DEFAULT_GOAL = (10.0, 0.0, 0.0)
DEFAULT_TERMINAL_WEIGHT = 10.0
DEFAULT_U_MAX = 2.0
DEFAULT_OBSTACLES = (
    (5.0, 3.0, 1.0),
    (5.0, -0.25, 1.0),
    (5.0, -3.0, 1.0),
)
# the larger bottom obstacle pushes the under arc deeper than the over arc.
TERRAIN_OBSTACLES = (
    (5.0, 3.0, 1.0),
    (5.0, -0.25, 1.0),
    (5.0, -4.0, 1.5),
)
TERRAIN_UPPER_AMPLITUDE = 1.0
TERRAIN_LOWER_AMPLITUDE = -1.0
TERRAIN_SHAPE = ((1.0, 0.0), (0.0, 1.0))
GUESS_CLEARANCE = 0.5

DEFAULT_W1 = 100.0
DEFAULT_W2 = 100.0
DEFAULT_W3 = 100.0
DEFAULT_WP = 5.0
DEFAULT_RHO = 10.0
DEFAULT_EPS_C = 1e-5
DEFAULT_OSSCP_EPS_C = 1e-7
DEFAULT_EPS_R = 1e-3
DEFAULT_EPS_S = 1e-3
DEFAULT_SCP_MAX_ITERS = 100
DEFAULT_OSSCP_MAX_ITERS = 200
DEFAULT_MAX_PROJECTION_FAILURES = 5
BENCHMARK_INEQ_PENALTY = "positive"

# documented reference values. The parameter echo lists every setting that differs from them.
REFERENCE_SETTINGS = {
    "K": 40,
    "dt": 0.25,
    "v": 1.0,
    "terminal_weight": 10.0,
    "w1": 100.0,
    "w2": 100.0,
    "w3": 100.0,
    "wp": 10.0,
    "rho": 10.0,
    "eps_c": 1e-4,
    "osscp_eps_c": 1e-4,
    "eps_r": 1e-3,
    "eps_s": 1e-3,
    "scp_max_iters": 100,
    "osscp_max_iters": 200,
}
REFERENCE_OBSTACLE_RADIUS = 1.5

CSV_FLOAT_FORMAT = "%.12g"
