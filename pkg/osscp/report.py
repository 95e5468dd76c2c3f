#
# Copyright (C) 2026 osscp developers. See LICENSE file for terms.
#
"""
Runs a RunConfig through multi-start SCP and/or OS-SCP and writes the results:

trajectories.csv    run_id, agent_id, iter, k, t, x, y, theta, u  (every iterate of every run)
residuals.csv       iter, agent_id, primal_norm, dual_norm        (OS-SCP only)
summary.csv         method, guess, cost, iterations, converged
report.txt          the summary as a table, wall times, settings that differ from the reference values and
                    the full parameter echo

Every cost written is recomputed from the written trajectory.
"""
import collections
import csv
import json
import logging
import math
import os

import numpy as np

from osscp.config import config_to_dict, guess_name
from osscp.consensus import osscp_solve
from osscp.errors import OsscpError
from osscp.functions import format_float
from osscp.problem import true_penalized_cost
from osscp.scenarios import build_scenario, make_guess, make_waypoint_guess, reference_deviations
from osscp.scp import multi_start, final_trajectory

logger = logging.getLogger(__name__)

COMPARISON_METHOD = "best-scp vs osscp"
CONSENSUS_ID = "consensus"
TERRAIN_LATTICE = 61
PLOT_MARGIN = 2.0


"""RunSummary: one row of summary.csv plus the wall time and the error of a failed run (None otherwise).
"""
RunSummary = collections.namedtuple('RunSummary', ['method', 'guess', 'cost', 'iterations', 'converged',
                                                   'wall_time', 'error'])
RunSummary.__new__.__defaults__ = (0.0, None)


"""RunReport: the configuration, the assembled Scenario, the parameter echo, the SCP records as (guess name,
ScpRunRecord) pairs, the OsscpResult (None when OS-SCP was not run or failed) and the process exit code.
"""
RunReport = collections.namedtuple('RunReport', ['config', 'scenario', 'parameters', 'scp_records', 'osscp_result',
                                                 'summaries', 'exit_code'])


def resolve_guesses(cfg, scenario):
    """(name, Trajectory) for every guess entry of cfg."""
    guesses = []
    for entry in cfg.guesses:
        if isinstance(entry, str):
            trajectory = make_guess(entry, scenario.params, scenario.obstacles, scenario.terrain)
        else:
            trajectory = make_waypoint_guess(entry["waypoints"], scenario.params)
        guesses.append((guess_name(entry), trajectory))
    return guesses


def _recomputed_cost(scenario, trajectory):
    return true_penalized_cost(scenario.problem, scenario.scp_config.weights, trajectory)


def _relative_difference(value, reference):
    if math.isnan(value) or math.isnan(reference):
        return float("nan")
    return (value - reference) / max(abs(reference), 1e-12)


def _exit_code(summaries):
    if any(s.error is not None for s in summaries):
        return 1
    if not all(s.converged for s in summaries):
        return 2
    return 0


def run(cfg, output_dir=None, method=None):
    """
    Execute cfg and write its result files.

    optional arguments:
    * output_dir: overrides cfg.output_dir.
    * method: overrides cfg.method.
    returns: RunReport. Solver failures are recorded per run and the remaining runs still execute.
    """
    if output_dir is not None:
        cfg = cfg._replace(output_dir=output_dir)
    if method is not None:
        cfg = cfg._replace(method=method)
    scenario = build_scenario(cfg.scenario, cfg.scenario_overrides, cfg.solver_overrides)
    guesses = resolve_guesses(cfg, scenario)
    names = [name for name, _ in guesses]
    deviations = reference_deviations(scenario.settings)
    parameters = {"config": config_to_dict(cfg), "settings": scenario.settings, "deviations": deviations}
    if deviations:
        logger.info("settings differing from the reference values: %s", ", ".join(deviations))
    logger.info("running %s on %s with guesses %s", cfg.method, scenario.name, ", ".join(names))

    summaries = []
    scp_records = []
    if cfg.method in ("scp", "both"):
        records = multi_start(scenario.problem, [g for _, g in guesses], scenario.scp_config,
                              max_workers=scenario.settings["max_workers"])
        for name, record in zip(names, records):
            scp_records.append((name, record))
            cost = float("nan") if record.error is not None else _recomputed_cost(scenario, final_trajectory(record))
            summaries.append(RunSummary("scp", name, cost, record.iterations, record.converged, record.wall_time,
                                        record.error))

    osscp_result = None
    if cfg.method in ("osscp", "both"):
        try:
            osscp_result = osscp_solve(scenario.problem, [g for _, g in guesses], scenario.osscp_config)
            summaries.append(RunSummary("osscp", CONSENSUS_ID, _recomputed_cost(scenario, osscp_result.zbar),
                                        osscp_result.iterations, osscp_result.converged, osscp_result.wall_time))
        except (OsscpError, ArithmeticError, np.linalg.LinAlgError, RuntimeError) as e:
            logger.error("osscp run failed: %s", e)
            summaries.append(RunSummary("osscp", CONSENSUS_ID, float("nan"), 0, False, 0.0, e))

    if cfg.method == "both":
        scp_rows = [s for s in summaries if s.method == "scp" and s.error is None]
        osscp_row = summaries[-1]
        if scp_rows:
            best = min(scp_rows, key=lambda s: s.cost)
            summaries.append(RunSummary(COMPARISON_METHOD, best.guess, _relative_difference(osscp_row.cost, best.cost),
                                        osscp_row.iterations, best.converged and osscp_row.converged))

    report = RunReport(cfg, scenario, parameters, tuple(scp_records), osscp_result, tuple(summaries),
                       _exit_code(summaries))
    write_report(report, cfg.output_dir)
    return report


def _writer(f):
    return csv.writer(f, lineterminator="\n")


def _trajectory_rows(run_id, agent_id, iteration, trajectory, dt):
    for k, point in enumerate(trajectory.points):
        yield [run_id, agent_id, iteration, k, format_float(k * dt)] + [format_float(v) for v in point]


def write_trajectories(report, path):
    dt = report.scenario.params.dt
    with open(path, "w") as f:
        writer = _writer(f)
        writer.writerow(["run_id", "agent_id", "iter", "k", "t", "x", "y", "theta", "u"])
        for name, record in report.scp_records:
            for j, trajectory in enumerate(record.trajectories):
                writer.writerows(_trajectory_rows("scp-%s" % name, "-", j, trajectory, dt))
        result = report.osscp_result
        if result is not None:
            for state, agents in zip(result.history, result.agent_history):
                for agent in agents:
                    writer.writerows(_trajectory_rows("osscp", agent.id, state.iteration, agent.trajectory, dt))
                writer.writerows(_trajectory_rows("osscp", CONSENSUS_ID, state.iteration, state.zbar, dt))
    return path


def write_residuals(report, path):
    with open(path, "w") as f:
        writer = _writer(f)
        writer.writerow(["iter", "agent_id", "primal_norm", "dual_norm"])
        result = report.osscp_result
        if result is not None:
            for state in result.history:
                for i, primal in enumerate(state.primal_residuals):
                    writer.writerow([state.iteration, i, format_float(primal), format_float(state.dual_residual)])
    return path


def write_summary(report, path):
    with open(path, "w") as f:
        writer = _writer(f)
        writer.writerow(["method", "guess", "cost", "iterations", "converged"])
        for s in report.summaries:
            writer.writerow([s.method, s.guess, format_float(s.cost), s.iterations, "true" if s.converged else "false"])
    return path


def format_table(summaries):
    header = ["method", "guess", "cost", "iterations", "converged", "wall time [s]", "error"]
    rows = [[s.method, s.guess, format_float(s.cost), str(s.iterations), "yes" if s.converged else "no",
             "%.3f" % s.wall_time, "" if s.error is None else str(s.error)] for s in summaries]
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in [header] + rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def write_text_report(report, path):
    with open(path, "w") as f:
        f.write("scenario: %s\nmethod: %s\nexit code: %d\n\n" % (report.scenario.name, report.config.method,
                                                                report.exit_code))
        f.write(format_table(report.summaries))
        result = report.osscp_result
        if result is not None:
            f.write("\nosscp stop reason: %s\n" % result.reason)
        deviations = report.parameters.get("deviations")
        if deviations:
            f.write("\ndeviations from the reference values:\n")
            for key, entry in deviations.items():
                f.write("  %s = %s (reference %s)\n" % (key, json.dumps(entry["value"]),
                                                         json.dumps(entry["reference"])))
        f.write("\nparameters:\n")
        f.write(json.dumps(report.parameters, sort_keys=True, indent=2))
        f.write("\n")
    return path


def write_report(report, directory):
    """Write the four result files into directory (created if needed). returns: their paths."""
    os.makedirs(directory, exist_ok=True)
    return [write_trajectories(report, os.path.join(directory, "trajectories.csv")),
            write_residuals(report, os.path.join(directory, "residuals.csv")),
            write_summary(report, os.path.join(directory, "summary.csv")),
            write_text_report(report, os.path.join(directory, "report.txt"))]


def plot_extent(scenario):
    """(xmin, xmax, ymin, ymax) covering the start, the goal and every obstacle plus a margin."""
    xs = [scenario.params.start[0], scenario.params.goal[0]]
    ys = [scenario.params.start[1], scenario.params.goal[1]]
    for o in scenario.obstacles:
        xs.extend([o.center[0] - o.radius, o.center[0] + o.radius])
        ys.extend([o.center[1] - o.radius, o.center[1] + o.radius])
    return min(xs) - PLOT_MARGIN, max(xs) + PLOT_MARGIN, min(ys) - PLOT_MARGIN, max(ys) + PLOT_MARGIN


def emit_plot_data(report, directory):
    """
    Write plot-ready CSVs: obstacles.csv (cx, cy, R), overlays.csv (run_id, overlay, k, x, y) with one overlay per
    iterate, and terrain.csv (x, y, cost) sampled on a regular lattice when the scenario has terrain.

    returns: the paths written.
    """
    os.makedirs(directory, exist_ok=True)
    scenario = report.scenario
    paths = []

    path = os.path.join(directory, "obstacles.csv")
    with open(path, "w") as f:
        writer = _writer(f)
        writer.writerow(["cx", "cy", "R"])
        for o in scenario.obstacles:
            writer.writerow([format_float(o.center[0]), format_float(o.center[1]), format_float(o.radius)])
    paths.append(path)

    path = os.path.join(directory, "overlays.csv")
    with open(path, "w") as f:
        writer = _writer(f)
        writer.writerow(["run_id", "overlay", "k", "x", "y"])
        overlays = [("scp-%s" % name, record.trajectories) for name, record in report.scp_records]
        if report.osscp_result is not None:
            overlays.append(("osscp", [state.zbar for state in report.osscp_result.history]))
        for run_id, trajectories in overlays:
            for j, trajectory in enumerate(trajectories):
                for k, point in enumerate(trajectory.points):
                    writer.writerow([run_id, j, k, format_float(point[0]), format_float(point[1])])
    paths.append(path)

    if scenario.terrain is not None:
        xmin, xmax, ymin, ymax = plot_extent(scenario)
        xs = np.linspace(xmin, xmax, TERRAIN_LATTICE)
        ys = np.linspace(ymin, ymax, TERRAIN_LATTICE)
        grid = scenario.terrain.sample(xs, ys)
        path = os.path.join(directory, "terrain.csv")
        with open(path, "w") as f:
            writer = _writer(f)
            writer.writerow(["x", "y", "cost"])
            for i, y in enumerate(ys):
                for j, x in enumerate(xs):
                    writer.writerow([format_float(x), format_float(y), format_float(grid[i, j])])
        paths.append(path)
    return paths
