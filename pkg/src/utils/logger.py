"""
Logging module for tda-stats
"""

import os
import logging
from logging.handlers import RotatingFileHandler

APP_LOGGER = 'tda-stats'


def setup_logger(name=APP_LOGGER, log_file='logs/tda.log', log_level='INFO'):
    """
    Setup logger with file and console handlers

    Args:
        name: Logger name
        log_file: Path to log file (None or '' disables the file handler)
        log_level: Console logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)

    Returns:
        Logger instance
    """
    logger = logging.getLogger(name)
    logger.setLevel(logging.DEBUG)

    # A second call (tests, repeated CLI invocations in one process) replaces
    # the handlers instead of stacking them.
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    file_formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )
    console_formatter = logging.Formatter(
        '%(levelname)s: %(message)s'
    )

    if log_file:
        log_dir = os.path.dirname(log_file)
        if log_dir and not os.path.exists(log_dir):
            os.makedirs(log_dir, exist_ok=True)

        file_handler = RotatingFileHandler(
            log_file,
            maxBytes=10*1024*1024,  # 10MB
            backupCount=5
        )
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(file_formatter)
        logger.addHandler(file_handler)

    console_handler = logging.StreamHandler()
    console_handler.setLevel(getattr(logging, log_level.upper()))
    console_handler.setFormatter(console_formatter)
    logger.addHandler(console_handler)

    return logger


def get_logger(area):
    """Child logger of the application logger, e.g. ``tda-stats.persistence``"""
    return logging.getLogger(f'{APP_LOGGER}.{area}')
