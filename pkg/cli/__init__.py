#!/usr/bin/env python3
"""
Command-line package: run configuration, commands and report writers
"""

from .commands import (COMMANDS, EXIT_FAILED, EXIT_OK, EXIT_USAGE, EXIT_WARNING, cmd_calibrate,
                       cmd_transform, cmd_verify)
from .config import RunConfig, build_config, parse_config_file

__all__ = ['COMMANDS', 'EXIT_FAILED', 'EXIT_OK', 'EXIT_USAGE', 'EXIT_WARNING', 'cmd_calibrate',
           'cmd_transform', 'cmd_verify', 'RunConfig', 'build_config', 'parse_config_file']
