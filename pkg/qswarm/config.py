import os
import sys
import pathlib
import argparse
import configparser

from pathlib import Path
from collections import OrderedDict

from qswarm import log
from qswarm import constants

__author__ = "qswarm developers"
__copyright__ = "Copyright (c) 2026, UChicago Argonne, LLC."
__docformat__ = 'restructuredtext en'
__all__ = ['config_to_list',
           'get_config_name',
           'log_values',
           'parse_known_args',
           'write']

CONFIG_FILE_NAME = os.path.join(str(pathlib.Path.home()), 'qswarm.conf')
QSWARM_HOME = os.path.join(str(pathlib.Path.home()), 'qswarm')
QSWARM_LOG_HOME = os.path.join(str(QSWARM_HOME), 'log')

SECTIONS = OrderedDict()

SECTIONS['general'] = {
    'config': {
        'default': CONFIG_FILE_NAME,
        'type': str,
        'help': "File name of configuration",
        'metavar': 'FILE'},
    'verbose': {
        'default': False,
        'help': 'Verbose output',
        'action': 'store_true'},
    }

SECTIONS['home'] = {
    'home': {
        'default': QSWARM_HOME,
        'type': Path,
        'help': 'name of the home directory for the output files',
        'metavar': 'FILE'},
    'log-home': {
        'default': QSWARM_LOG_HOME,
        'type': Path,
        'help': 'name of the home directory for the log files',
        'metavar': 'FILE'},
    }

SECTIONS['density'] = {
    'scenario': {
        'default': None,
        'type': str,
        'help': 'scenario JSON file',
        'metavar': 'FILE'},
    'out': {
        'default': None,
        'type': str,
        'help': 'output file (JSON) or directory (CSV); stdout when not set',
        'metavar': 'PATH'},
    'format': {
        'default': 'json',
        'type': str,
        'choices': ['json', 'csv'],
        'help': 'output format'},
    }

SECTIONS['evolve'] = {
    'scenario0': {
        'default': None,
        'type': str,
        'help': 'scenario JSON file of the initial swarm',
        'metavar': 'FILE'},
    'scenario1': {
        'default': None,
        'type': str,
        'help': 'scenario JSON file of the final swarm',
        'metavar': 'FILE'},
    }

SECTIONS['propagate'] = {
    'time': {
        'default': 1.0,
        'type': float,
        'help': 'propagation time (hbar = 1)'},
    'dt': {
        'default': constants.DT,
        'type': float,
        'help': 'time step of the Lindblad integrator'},
    }

SECTIONS['mission'] = {
    'summary': {
        'default': False,
        'help': 'print iterations, convergence and final distance instead of the full trace',
        'action': 'store_true'},
    'seed': {
        'default': None,
        'type': int,
        'help': 'sensor noise seed, overrides the scenario value'},
    'progress': {
        'default': False,
        'help': 'show a progress bar',
        'action': 'store_true'},
    }

SECTIONS['surface'] = {
    'resolution': {
        'default': constants.RESOLUTION,
        'type': int,
        'help': 'samples per axis'},
    }

SECTIONS['paper-check'] = {
    'json': {
        'default': False,
        'help': 'machine-readable report',
        'action': 'store_true'},
    'strict-paper': {
        'default': False,
        'help': 'fail when any printed value diverges from the computed one',
        'action': 'store_true'},
    }

HOME_PARAMS = ('home', )
DENSITY_PARAMS = ('density', )
EVOLVE_PARAMS = ('evolve', 'density')
PROPAGATE_PARAMS = ('propagate', 'density')
MISSION_PARAMS = ('mission', 'density')
SURFACE_PARAMS = ('surface', 'density')
PAPER_CHECK_PARAMS = ('paper-check', 'density')

QSWARM_PARAMS = ('home', 'density', 'evolve', 'propagate', 'mission', 'surface', 'paper-check')

NICE_NAMES = ('General', 'Home', 'Density', 'Evolve', 'Propagate', 'Mission', 'Surface', 'Paper check')


def make_default_home_dir():
    pathlib.Path(QSWARM_HOME).mkdir(exist_ok=True, parents=True)


def make_default_log_home_dir():
    pathlib.Path(QSWARM_LOG_HOME).mkdir(exist_ok=True, parents=True)


def get_config_name(argv=None):
    """Get the command line --config option."""
    argv = sys.argv[1:] if argv is None else argv
    name = CONFIG_FILE_NAME
    for i, arg in enumerate(argv):
        if arg.startswith('--config'):
            if arg == '--config':
                return argv[i + 1] if i + 1 < len(argv) else name
            else:
                name = arg.split('--config')[1]
                if name[0] == '=':
                    name = name[1:]
                return name

    return name


def get_base_log_dirs(argv=None):
    config = configparser.ConfigParser()
    config.read([get_config_name(argv)])
    return config['home']['log-home']


def parse_known_args(parser, argv=None, sections=None):
    """
    Parse arguments from file and then override by the ones specified on the
    command line. The first entry of *argv* selects the subcommand; only the
    config values of its *sections* are read from the file.
    """
    argv = sys.argv[1:] if argv is None else list(argv)
    if argv:
        config_values = config_to_list(config_name=get_config_name(argv), sections=sections)
        values = argv[:1] + config_values + argv[1:]
    else:
        values = []
    parsed = parser.parse_known_args(values)
    if parsed[1]:
        log.warning(f"ignoring unknown arguments {parsed[1]}")
    return parsed[0]


def config_to_list(config_name=CONFIG_FILE_NAME, sections=None):
    """
    Read arguments from config file and convert them to a list of keys and
    values as sys.argv does when they are specified on the command line.
    *config_name* is the file name of the config file.
    """
    result = []
    config = configparser.ConfigParser()

    if not config.read([config_name]):
        return []

    for section in SECTIONS:
        if sections is not None and section not in sections:
            continue
        for name, opts in ((n, o) for n, o in SECTIONS[section].items() if config.has_option(section, n)):
            value = config.get(section, name)

            if value != '' and value != 'None':
                action = opts.get('action', None)

                if action == 'store_true' and value == 'True':
                    # Only the key is on the command line for this action
                    result.append('--{}'.format(name))

                if not action == 'store_true':
                    result.append('--{}={}'.format(name, value))

    return result


class Params(object):
    def __init__(self, sections=()):
        self.sections = sections + ('general',)

    def add_parser_args(self, parser):
        for section in self.sections:
            for name in sorted(SECTIONS[section]):
                opts = SECTIONS[section][name]
                parser.add_argument('--{}'.format(name), **opts)

    def add_arguments(self, parser):
        self.add_parser_args(parser)
        return parser

    def get_defaults(self):
        parser = argparse.ArgumentParser()
        self.add_arguments(parser)

        return parser.parse_args([])


def write(config_file, args=None, sections=None):
    """
    Write *config_file* with values from *args* if they are specified,
    otherwise use the defaults. If *sections* are specified, write values from
    *args* only to those sections, use the defaults on the remaining ones.
    """
    config = configparser.ConfigParser()

    for section in SECTIONS:
        config.add_section(section)
        for name, opts in SECTIONS[section].items():
            if args and sections and section in sections and hasattr(args, name.replace('-', '_')):
                value = getattr(args, name.replace('-', '_'))
            else:
                value = opts['default']
            value = '' if value is None else value

            prefix = '# ' if value == '' else ''

            if name != 'config':
                config.set(section, prefix + name, str(value))

    with open(config_file, 'w') as f:
        config.write(f)
    log.info(f"configuration written to {config_file}")


def log_values(args):
    """Log all values set in the args namespace.

    Arguments are grouped according to their section and logged alphabetically
    using the DEBUG log level thus --verbose is required.
    """
    args = args.__dict__

    for section, name in zip(SECTIONS, NICE_NAMES):
        entries = sorted((k for k in args.keys() if k.replace('_', '-') in SECTIONS[section]))
        if entries:
            log.debug(name)

            for entry in entries:
                value = args[entry] if args[entry] is not None else "-"
                log.debug("  {:<16} {}".format(entry, value))
