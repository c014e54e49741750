"""
Command-line driver: ingestion, summaries, inference and plots
"""

from .app import EXIT_DATA, EXIT_OK, EXIT_USAGE, build_parser, run
from .commands import COMMANDS
from .run_config import RunConfig

__all__ = ['RunConfig', 'COMMANDS', 'build_parser', 'run', 'EXIT_OK', 'EXIT_USAGE', 'EXIT_DATA']
