#
# Copyright (C) 2026 osscp developers. See LICENSE file for terms.
#
"""
Command line front end.

    osscp solve --config run.json [--method scp|osscp|both] [--out DIR]
    osscp scenarios list
    osscp config print-defaults unicycle-basic

The log level is taken from the OSSCP_LOG_LEVEL environment variable (default WARNING).
"""
import argparse
import logging
import os
import sys

from osscp.config import load_config, dump_config, RunConfig
from osscp.constants import METHODS
from osscp.errors import OsscpError
from osscp.report import run, emit_plot_data
from osscp.scenarios import SCENARIOS, list_scenarios, default_overrides, find_scenario

logger = logging.getLogger("osscp")

EXIT_ERROR = 1


def configure_logging():
    level = os.environ.get("OSSCP_LOG_LEVEL", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(asctime)s %(name)s %(levelname)s: %(message)s")


def default_config(scenario):
    spec = find_scenario(scenario)
    scenario_settings, solver_settings = default_overrides(scenario)
    return RunConfig(scenario, "both", list(spec.guesses), scenario_settings, solver_settings)


def cmd_solve(args):
    cfg = load_config(args.config)
    report = run(cfg, output_dir=args.out, method=args.method)
    emit_plot_data(report, report.config.output_dir)
    logger.info("results written to %s", report.config.output_dir)
    return report.exit_code


def cmd_scenarios_list(args):
    for name in list_scenarios():
        print("%-20s %s" % (name, SCENARIOS[name].description))
    return 0


def cmd_config_print_defaults(args):
    sys.stdout.write(dump_config(default_config(args.scenario)))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="osscp", description="multi-start SCP and OS-SCP trajectory optimization")
    commands = parser.add_subparsers(dest="command")
    commands.required = True

    solve = commands.add_parser("solve", help="run a configuration and write its result files")
    solve.add_argument("--config", required=True, help="run configuration (JSON)")
    solve.add_argument("--method", choices=sorted(METHODS), default=None, help="override the configured method")
    solve.add_argument("--out", default=None, help="override the configured output directory")
    solve.set_defaults(handler=cmd_solve)

    scenarios = commands.add_parser("scenarios", help="inspect the scenario registry")
    scenario_commands = scenarios.add_subparsers(dest="scenarios_command")
    scenario_commands.required = True
    scenario_commands.add_parser("list", help="list the registered scenarios").set_defaults(
        handler=cmd_scenarios_list)

    config = commands.add_parser("config", help="configuration helpers")
    config_commands = config.add_subparsers(dest="config_command")
    config_commands.required = True
    defaults = config_commands.add_parser("print-defaults", help="print the full default configuration of a scenario")
    defaults.add_argument("scenario")
    defaults.set_defaults(handler=cmd_config_print_defaults)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    configure_logging()
    try:
        return args.handler(args)
    except (OsscpError, OSError) as e:
        logger.error("%s", e)
        return EXIT_ERROR
