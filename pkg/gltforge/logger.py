#!/usr/bin/env python3
# encoding: utf-8
'''
Created on 18 Oct 2026

@author: gltforge developers

Logging bootstrap for the gltforge command line and test suites.  Library
modules only ever call logging.getLogger(__name__); the application decides
where records go by passing a dictConfig dictionary to init().
'''
import copy
import json
import logging
from logging.config import dictConfig
import os
import sys

from gltforge.errors import GltForgeError


class LoggerConfDoesNotExist(GltForgeError):
    '''
    The --log-config file is missing; the CLI exits with the config error
    status before any run starts.
    '''

    def __init__(self, path):
        super().__init__('Logging configuration file does not exist: %r'
                         % (path,))
        self.path = path


class _DebugInfoOnly(logging.Filter):
    '''
    Logging filter which keeps only DEBUG and INFO messages, so that
    progress goes to stdout and problems go to stderr.
    '''

    def filter(self, record):
        return record.levelno <= logging.INFO


# The logging module default; the CLI starts here and -v/-q move it.
DEFAULT_LOGLEVEL = logging.WARNING

DEFAULT_LOGGING_CONFIG = dict(
    version=1,
    disable_existing_loggers=False,
    formatters={
        'default': {'format':
                    '%(asctime)s %(name)-18s [%(filename)s:%(lineno)d] '
                    '%(levelname)-8s %(message)s'}
    },
    filters={
        "debug_info_only": {
            '()': _DebugInfoOnly
        }
    },
    handlers={
        "console_stdout": {
            "class": "logging.StreamHandler",
            "level": "DEBUG",
            "formatter": "default",
            "stream": "ext://sys.stdout",
            "filters": ['debug_info_only']
        },
        "console_stderr": {
            "class": "logging.StreamHandler",
            "level": "WARNING",
            "formatter": "default",
            "stream": "ext://sys.stderr"
        }
    },
    root={
        'handlers': ['console_stdout', 'console_stderr'],
        'level': DEFAULT_LOGLEVEL,
    },
)

# Test suites log everything the library emits; pytest captures stdout.
TEST_LOGGING_CONFIG = copy.deepcopy(DEFAULT_LOGGING_CONFIG)
TEST_LOGGING_CONFIG['root']['level'] = logging.DEBUG


def load_json_config(configfile):
    ''' Load a json formatted dictionary of logging configuration
        information.  Throw exceptions if the given file cannot be read or
        there is an error parsing the file contents.
    '''
    if not (os.path.exists(configfile) and os.path.isfile(configfile)):
        raise LoggerConfDoesNotExist(configfile)
    try:
        with open(configfile, 'r', encoding='utf-8') as fp:
            return json.load(fp)
    except json.JSONDecodeError as e:
        print("Error parsing logging configuration file: %r" %
              (configfile,), file=sys.stderr)
        print(e, file=sys.stderr)
        raise
    except IOError as e:
        print("IOError opening logging configuration file: %r" %
              (configfile,), file=sys.stderr)
        print(e, file=sys.stderr)
        raise


def adjust_loglevel(logging_config=DEFAULT_LOGGING_CONFIG,
                    verbosity=0, quiet=0):
    ''' Every -v lowers the root log level by 10 (down to 0), every -q
        raises it by 10.  Returns an adjusted copy; the input is untouched.
    '''
    config = copy.deepcopy(logging_config)
    loglevel_delta = 10 * (quiet or 0) - 10 * (verbosity or 0)
    if loglevel_delta:
        for name in ['root', '']:
            cfg_level = config.get(name, None)
            if cfg_level:
                level = cfg_level.get('level', DEFAULT_LOGLEVEL)
                if isinstance(level, str):
                    level = logging.getLevelName(level)
                config[name]['level'] = max(level + loglevel_delta, 0)
    return config


def init(logging_config=DEFAULT_LOGGING_CONFIG):
    '''
    Configure logging
    '''
    dictConfig(logging_config)


def configure(configfile=None, verbosity=0, quiet=0):
    '''
    One call used by the command line: optional json file, then the -v/-q
    adjustment, then dictConfig.  Returns the applied dictionary.
    '''
    config = DEFAULT_LOGGING_CONFIG
    if configfile:
        config = load_json_config(configfile)
    config = adjust_loglevel(config, verbosity, quiet)
    init(config)
    return config
