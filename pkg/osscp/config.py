#
# Copyright (C) 2026 osscp developers. See LICENSE file for terms.
#
"""
Run configuration files. A run configuration is a JSON object:

    {
      "scenario": "unicycle-basic",            (required)
      "method": "scp" | "osscp" | "both",      (default "both")
      "guesses": ["over", "straight", {"name": "via-gap", "waypoints": [[5.0, -1.625]]}],
      "scenario_overrides": {"K": 30, ...},
      "solver_overrides": {"rho": 5.0, ...},
      "output_dir": "out",
      "seed": 0
    }

guesses defaults to the scenario's own guess list. seed is reserved; every algorithm here is deterministic.
"""
import collections
import json

from osscp.constants import METHODS
from osscp.errors import ConfigParseError, InvalidConfigError, OsscpError
from osscp.scenarios import find_scenario, check_override_keys, canonical_guess_kind, SCENARIO_KEYS, SOLVER_KEYS


"""RunConfig: one validated run configuration. Lists and dicts only, so it survives a trip through JSON unchanged.
"""
RunConfig = collections.namedtuple('RunConfig', ['scenario', 'method', 'guesses', 'scenario_overrides',
                                                 'solver_overrides', 'output_dir', 'seed'])
RunConfig.__new__.__defaults__ = ("both", None, None, None, "out", 0)

CONFIG_KEYS = RunConfig._fields
WAYPOINT_GUESS_KEYS = ("name", "waypoints")


def _guess_entry(entry, index):
    if isinstance(entry, str):
        canonical_guess_kind(entry)
        return entry
    if not isinstance(entry, dict):
        raise InvalidConfigError("guess %d must be a guess name or a waypoint object." % index)
    for key in entry:
        if key not in WAYPOINT_GUESS_KEYS:
            raise InvalidConfigError("unknown key %r in guess %d." % (key, index))
    if not isinstance(entry.get("name"), str) or "waypoints" not in entry:
        raise InvalidConfigError("waypoint guess %d needs a name and a waypoints list." % index)
    try:
        waypoints = [[float(c) for c in w] for w in entry["waypoints"]]
    except (TypeError, ValueError):
        raise InvalidConfigError("waypoints of guess %d must be lists of numbers." % index)
    if any(len(w) != 2 for w in waypoints):
        raise InvalidConfigError("waypoints of guess %d must be [x, y] pairs." % index)
    return {"name": entry["name"], "waypoints": waypoints}


def guess_name(entry):
    return entry if isinstance(entry, str) else entry["name"]


def run_config_from_dict(values):
    """Validate a decoded configuration object and fill in the defaults."""
    if not isinstance(values, dict):
        raise InvalidConfigError("a run configuration must be a JSON object.")
    for key in values:
        if key not in CONFIG_KEYS:
            raise InvalidConfigError("unknown configuration key %r." % key)
    if "scenario" not in values:
        raise InvalidConfigError("missing required configuration key 'scenario'.")
    scenario = values["scenario"]
    try:
        spec = find_scenario(scenario)
    except OsscpError as e:
        raise InvalidConfigError("invalid key 'scenario': %s" % e.args[0])

    method = values.get("method", "both")
    if not isinstance(method, str) or method not in METHODS:
        raise InvalidConfigError("invalid key 'method': %r is not one of %s." % (method, ", ".join(sorted(METHODS))))

    guesses = values.get("guesses")
    if guesses is None:
        guesses = list(spec.guesses)
    if not isinstance(guesses, list) or not guesses:
        raise InvalidConfigError("invalid key 'guesses': expected a non-empty list.")
    try:
        guesses = [_guess_entry(g, i) for i, g in enumerate(guesses)]
    except OsscpError as e:
        raise InvalidConfigError("invalid key 'guesses': %s" % e.args[0])
    names = [guess_name(g) for g in guesses]
    if len(set(names)) != len(names):
        raise InvalidConfigError("invalid key 'guesses': guess names must be unique.")

    overrides = {}
    for key, allowed, what in (("scenario_overrides", SCENARIO_KEYS, "scenario"),
                               ("solver_overrides", SOLVER_KEYS, "solver")):
        value = values.get(key)
        value = {} if value is None else value
        if not isinstance(value, dict):
            raise InvalidConfigError("invalid key %r: expected an object." % key)
        check_override_keys(value, allowed, what)
        overrides[key] = dict(value)

    output_dir = values.get("output_dir", "out")
    if not isinstance(output_dir, str) or not output_dir:
        raise InvalidConfigError("invalid key 'output_dir': expected a non-empty path.")
    seed = values.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise InvalidConfigError("invalid key 'seed': expected an integer.")
    return RunConfig(scenario, method, guesses, overrides["scenario_overrides"], overrides["solver_overrides"],
                     output_dir, seed)


def config_to_dict(cfg):
    return collections.OrderedDict(zip(RunConfig._fields, cfg))


def load_config(path):
    """
    Read and validate a run configuration file.

    raises ConfigParseError with the line and column of malformed JSON, InvalidConfigError naming the offending key
    for schema violations.
    """
    with open(path) as f:
        text = f.read()
    try:
        values = json.loads(text)
    except ValueError as e:
        lineno = getattr(e, "lineno", None)
        colno = getattr(e, "colno", None)
        raise ConfigParseError("%s: %s" % (path, e), lineno, colno)
    return run_config_from_dict(values)


def dump_config(cfg):
    return json.dumps(config_to_dict(cfg), sort_keys=True, indent=2) + "\n"


def write_config(cfg, path):
    with open(path, "w") as f:
        f.write(dump_config(cfg))
    return path
