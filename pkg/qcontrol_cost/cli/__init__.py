"""
Command-line interface for qcontrol-cost

- main: the `qcc` entry point (global options, logging, exit codes)
- commands: registered subcommands and the `qcc-init` entry point
- modelspec: JSON model files
- output: CSV, tables and SVG
"""

from .main import cli_main, main

__all__ = ['cli_main', 'main']
