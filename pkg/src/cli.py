"""
Command-line entry point.

    python -m src.cli render --config fuchsian_baseline.json --out output/
    python -m src.cli all --config adjoined_root.json --out output/ --threads 4

Exit codes: 0 success, 2 validation error, 3 consistency failure, 1 anything else.
"""

import argparse
import logging
import os
import sys

from dotenv import load_dotenv

from .config import load_run_config
from .pipeline import STAGES, run
from .utils.errors import ConfigError, exit_code_for
from .utils.logging_setup import setup_logging

logger = logging.getLogger(__name__)


def build_parser():
    parser = argparse.ArgumentParser(
        prog='kleinian',
        description='Limit sets, bumping sets, Nielsen cores and characteristic-submanifold '
                    'pieces of Kleinian groups')
    parser.add_argument('subcommand', choices=list(STAGES), help='Stage to run')
    parser.add_argument('--config', required=True, help='JSON run configuration')
    parser.add_argument('--out', default='output', help='Directory for images, reports and CSV files')
    parser.add_argument('--threads', type=int, help='Worker count (default: KLEIN_THREADS or the config)')
    parser.add_argument('--depth', type=int, help='Override the limit-set depth')
    parser.add_argument('--seed', type=int, help='Override the pair-sampling seed')
    return parser


def _env_threads():
    value = os.getenv('KLEIN_THREADS')
    if not value:
        return None
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"KLEIN_THREADS must be an integer, got {value!r}")


def main(argv=None):
    """Parse arguments, run the subcommand and return the process exit code."""
    load_dotenv()
    setup_logging(os.getenv('KLEIN_LOG_LEVEL', 'INFO'), os.getenv('KLEIN_LOG_DIR'))

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2

    try:
        threads = args.threads if args.threads is not None else _env_threads()
        overrides = {'depth': args.depth, 'threads': threads, 'seed': args.seed}
        cfg = load_run_config(args.config, overrides)
        run(args.subcommand, cfg, args.out)
    except Exception as e:
        code = exit_code_for(e)
        logger.error(f"{args.subcommand} failed ({type(e).__name__}): {str(e)}")
        return code

    logger.info(f"{args.subcommand} completed successfully")
    return 0


if __name__ == '__main__':
    sys.exit(main())
