"""
tda-stats
Command-line entry point
"""

import sys
from src.cli import run


def main():
    """Run one tda-stats subcommand and exit with its status"""
    sys.exit(run(sys.argv[1:]))


if __name__ == '__main__':
    main()
