"""
Logger Utility - Configures application-wide logging
Logs to the diagnostic stream (colourised) and optionally to rotating files
"""

import os
import sys
import logging
from logging.handlers import RotatingFileHandler, TimedRotatingFileHandler
import colorlog
from config.settings import config


def setup_logging(quiet=False):
    """
    Setup application logging

    Console output goes to stderr so that standard output stays reserved
    for command results. With LOG_TO_FILE enabled, creates:
    - system.log: General application logs
    - repairs.log: One line per repair step
    - errors.log: Errors and warnings

    Args:
        quiet: If True, only errors reach the console
    """
    root_logger = logging.getLogger()
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)
    root_logger.setLevel(logging.DEBUG)

    console_level = logging.ERROR if quiet else getattr(logging, config.LOG_LEVEL.upper())
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(console_level)
    console_handler.setFormatter(colorlog.ColoredFormatter(
        '%(log_color)s%(levelname)s%(reset)s - %(message)s',
        log_colors={
            'DEBUG': 'cyan',
            'INFO': 'green',
            'WARNING': 'yellow',
            'ERROR': 'red',
            'CRITICAL': 'bold_red',
        }
    ))
    root_logger.addHandler(console_handler)

    repair_logger = logging.getLogger('repairs')
    for handler in repair_logger.handlers[:]:
        repair_logger.removeHandler(handler)
    repair_logger.setLevel(logging.INFO)

    if not config.LOG_TO_FILE:
        return

    os.makedirs(config.LOG_FILE_PATH, exist_ok=True)

    # System log handler (rotating by size)
    system_handler = RotatingFileHandler(
        os.path.join(config.LOG_FILE_PATH, 'system.log'),
        maxBytes=10*1024*1024,  # 10 MB
        backupCount=5
    )
    system_handler.setLevel(logging.DEBUG)
    system_handler.setFormatter(logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    ))
    root_logger.addHandler(system_handler)

    # Repair step log handler (rotating daily)
    repair_handler = TimedRotatingFileHandler(
        os.path.join(config.LOG_FILE_PATH, 'repairs.log'),
        when='midnight',
        interval=1,
        backupCount=config.LOG_RETENTION_DAYS
    )
    repair_handler.setLevel(logging.INFO)
    repair_handler.setFormatter(logging.Formatter('%(asctime)s - %(message)s'))
    repair_logger.addHandler(repair_handler)

    # Error log handler (rotating daily)
    error_handler = TimedRotatingFileHandler(
        os.path.join(config.LOG_FILE_PATH, 'errors.log'),
        when='midnight',
        interval=1,
        backupCount=config.LOG_RETENTION_DAYS
    )
    error_handler.setLevel(logging.WARNING)
    error_handler.setFormatter(logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s - %(pathname)s:%(lineno)d'
    ))
    root_logger.addHandler(error_handler)

    logging.getLogger(__name__).debug("Logging system initialized")


def get_logger(name):
    """
    Get a logger instance

    Args:
        name: Logger name (typically __name__ of the module)

    Returns:
        Logger instance
    """
    return logging.getLogger(name)


def log_repair_step(seed, step, action, bad_axiom, replacement=None, candidates=0):
    """
    Log a single repair step to the repair log

    Args:
        seed: Seed of the repair run
        step: Step index (0-based)
        action: 'weaken' or 'remove'
        bad_axiom: Rendered bad axiom
        replacement: Rendered replacement axiom (weaken only)
        candidates: Size of the candidate weakening set
    """
    repair_logger = logging.getLogger('repairs')

    msg = f"Seed: {seed} | Step: {step} | Action: {action} | Bad: {bad_axiom}"
    if replacement is not None:
        msg += f" | Replacement: {replacement} | Candidates: {candidates}"

    repair_logger.info(msg)
