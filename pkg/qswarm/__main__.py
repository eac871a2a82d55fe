#!/usr/bin/env python
# -*- coding: utf-8 -*-

# Copyright (c) 2026, UChicago Argonne, LLC. All rights reserved.
# See LICENSE.txt for license details.

"""
Command line entry point.

Exit codes: 0 success, 1 validation error, 2 I/O error, 3 ledger mismatch.
"""
import os
import sys
import logging
import argparse

from qswarm import log
from qswarm import config
from qswarm import cli
from qswarm.paper_check import LedgerMismatch


def init(args):
    if hasattr(args, 'home'):
        args.home.mkdir(exist_ok=True, parents=True)
    else:
        config.make_default_home_dir()
    if hasattr(args, 'log_home'):
        args.log_home.mkdir(exist_ok=True, parents=True)
    else:
        config.make_default_log_home_dir()
    if os.path.exists(args.config):
        log.info("{0} already exists, overwriting".format(args.config))
    config.write(str(args.config), args=args, sections=config.HOME_PARAMS)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)

    parser = argparse.ArgumentParser(prog='qswarm')
    parser.add_argument('--config', **config.SECTIONS['general']['config'])

    cmd_parsers = [
        ('init',        init,                config.HOME_PARAMS,        "Create configuration file and home directory"),
        ('density',     cli.cmd_density,     config.DENSITY_PARAMS,     "Swarm density matrix, purity, barycenter and reduced matrices"),
        ('evolve',      cli.cmd_evolve,      config.EVOLVE_PARAMS,      "Recover the evolution operator between two swarm snapshots"),
        ('propagate',   cli.cmd_propagate,   config.PROPAGATE_PARAMS,   "Propagate a swarm with its Hamiltonian and jump operators"),
        ('mission',     cli.cmd_mission,     config.MISSION_PARAMS,     "Run the target-reaching loop"),
        ('surface',     cli.cmd_surface,     config.SURFACE_PARAMS,     "Probability surfaces of the robots as CSV"),
        ('paper-check', cli.cmd_paper_check, config.PAPER_CHECK_PARAMS, "Recompute the published worked examples"),
    ]

    subparsers = parser.add_subparsers(title="Commands", metavar='')
    sections = None

    for cmd, func, cmd_sections, text in cmd_parsers:
        cmd_params = config.Params(sections=cmd_sections)
        cmd_parser = subparsers.add_parser(cmd, help=text, formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        cmd_parser = cmd_params.add_arguments(cmd_parser)
        cmd_parser.set_defaults(_func=func)
        if argv and argv[0] == cmd:
            sections = cmd_params.sections

    if not argv or sections is None:
        parser.print_help(sys.stderr)
        return 1

    try:
        args = config.parse_known_args(parser, argv, sections=sections)
    except (ValueError, OSError) as e:
        sys.stderr.write(f"qswarm: {e}\n")
        return 1

    try:
        logger_file = os.path.join(config.get_base_log_dirs(argv), 'qswarm.log')
    except KeyError:
        logger_file = None
    if logger_file is not None and not os.path.isdir(os.path.dirname(logger_file)):
        logger_file = None
    log.setup_custom_logger(lfname=logger_file, level=logging.DEBUG if args.verbose else logging.INFO)
    config.log_values(args)

    try:
        args._func(args)
    except LedgerMismatch as e:
        log.error(str(e))
        return 3
    except (ValueError, RuntimeError) as e:
        log.error(str(e))
        return 1
    except OSError as e:
        log.error(str(e))
        return 2
    return 0


if __name__ == '__main__':
    sys.exit(main())
