"""Logging configuration used by the command line."""

import logging
import sys
from datetime import datetime
from pathlib import Path

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'


def setup_logging(level='INFO', log_dir=None):
    """
    Configure the root logger: standard error always, a timestamped file when ``log_dir`` is set.

    Parameters:
    -----------
    level : str or int
        Logging level name or number.
    log_dir : str or Path, optional
        Directory for ``kleinian_<timestamp>.txt`` log files.

    Returns:
    --------
    Path or None
        The log file path when a file handler was installed.
    """
    if isinstance(level, str):
        level = getattr(logging, level.upper(), logging.INFO)

    handlers = [logging.StreamHandler(sys.stderr)]
    log_file = None
    if log_dir:
        Path(log_dir).mkdir(parents=True, exist_ok=True)
        log_file = Path(log_dir) / f"kleinian_{datetime.now().strftime('%Y%m%d_%H%M%S')}.txt"
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(level=level, format=LOG_FORMAT, handlers=handlers, force=True)
    return log_file
