"""
Argument parsing and dispatch for the tda-stats command line
"""

import argparse

from src import __version__
from src.utils.config import Config
from src.utils.errors import DataError, TDAError, ValidationError
from src.utils.logger import setup_logger
from .commands import COMMANDS, SHAPES
from .run_config import TEST_KINDS, RunConfig

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3


def _common_flags():
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group('pipeline options (override the environment)')
    group.add_argument('--metric', help='p1, p2, pN or max (TDA_METRIC)')
    group.add_argument('--max-dim', dest='max_dim', type=int, help='largest simplex dimension (TDA_MAX_DIM)')
    group.add_argument('--max-scale', dest='max_scale', help="filtration scale or 'auto' (TDA_MAX_SCALE)")
    group.add_argument('--cap', help="truncation of infinite deaths or 'auto' (TDA_TRUNCATION_CAP)")
    group.add_argument('--alpha', type=float, help='band level (TDA_ALPHA)')
    group.add_argument('--perms', help="N, 'auto' or 'exhaustive' (TDA_PERMUTATIONS)")
    group.add_argument('--boot', type=int, help='bootstrap rounds (TDA_BOOTSTRAP_ROUNDS)')
    group.add_argument('--seed', type=int, help='random seed (TDA_SEED)')
    group.add_argument('--out', help='output directory (TDA_OUTPUT_DIR)')
    group.add_argument('--grid-resolution', dest='grid_resolution', type=int,
                       help='landscape grid intervals (TDA_GRID_RESOLUTION)')
    group.add_argument('--dims', type=int, nargs='+', help='homology dimensions (default: all available)')
    group.add_argument('--p', type=float, help='Wasserstein order (default 2)')
    group.add_argument('--workers', type=int, help='worker threads (TDA_WORKERS)')
    group.add_argument('--env-file', dest='env_file', default='.env', help='dotenv file to load')
    group.add_argument('--log-level', dest='log_level', help='console log level (LOG_LEVEL)')
    return parent


def build_parser():
    parser = argparse.ArgumentParser(
        prog='tda-stats',
        description='Persistent homology summaries and statistics for point clouds',
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    sub = parser.add_subparsers(dest='command', metavar='command')
    sub.required = True
    common = _common_flags()

    p = sub.add_parser('persist', parents=[common], help='point clouds -> diagrams and barcodes')
    p.add_argument('inputs', nargs='+', help='point cloud CSV files')

    p = sub.add_parser('landscape', parents=[common], help='diagrams -> landscapes')
    p.add_argument('inputs', nargs='+', help='diagram CSV files')
    p.add_argument('--no-grid', dest='grid', action='store_false', help='skip the sampled grid CSV')

    p = sub.add_parser('distance', parents=[common], help='Wasserstein and bottleneck distance')
    p.add_argument('inputs', nargs=2, help='two diagram CSV files')

    p = sub.add_parser('mean', parents=[common], help='Frechet mean of diagrams')
    p.add_argument('inputs', nargs='+', help='diagram CSV files or directories')

    p = sub.add_parser('band', parents=[common], help='bootstrap confidence band of a cloud')
    p.add_argument('inputs', nargs=1, help='point cloud CSV file')

    p = sub.add_parser('test', parents=[common], help='two-sample test between summary directories')
    p.add_argument('inputs', nargs=2, help='two directories of diagrams or landscapes')
    p.add_argument('--test-kind', dest='test_kind', choices=TEST_KINDS,
                   help='landscape permutation (default), diagram permutation or Welch t-test')

    p = sub.add_parser('plot', parents=[common], help='SVG plots of summaries')
    p.add_argument('inputs', nargs='+', help='diagram, barcode or landscape files')
    p.add_argument('--mean', action='store_true', default=None, help='overlay the mean of the landscapes')

    p = sub.add_parser('sample', parents=[common], help='write synthetic point clouds')
    p.add_argument('--shape', choices=SHAPES, default='circle')
    p.add_argument('--n', type=int, default=100, help='points (per circle)')
    p.add_argument('--count', type=int, default=1, help='number of clouds')
    p.add_argument('--noise', type=float, default=0.0, help='Gaussian noise level')
    p.add_argument('--radius', type=float, default=1.0)
    return parser


def run(argv=None) -> int:
    """Parse ``argv``, run one subcommand and return the process exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    config = Config(args.env_file)
    errors = config.validate()
    if errors:
        print('Configuration errors:')
        for error in errors:
            print(f'  ✗ {error}')
        return EXIT_USAGE

    log_level = args.log_level or config.log_level
    logger = setup_logger(log_file=config.log_file, log_level=log_level)
    if log_level.upper() == 'DEBUG':
        config.display()
        print()
    try:
        run_config = RunConfig.from_sources(args.command, config, args)
        logger.info('Running %s on %d input(s)', args.command, len(run_config.inputs))
        COMMANDS[args.command](run_config)
    except ValidationError as e:
        logger.error(f'{args.command} failed: {e}')
        print(f'✗ {e}')
        return EXIT_USAGE
    except (DataError, TDAError) as e:
        logger.error(f'{args.command} failed: {e}')
        print(f'✗ {e}')
        return EXIT_DATA
    return EXIT_OK
