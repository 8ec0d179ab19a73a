import logging
import os
import sys

# Standard output carries results, so logs go to stderr and an optional file
LOG_LEVEL = os.environ.get('SB_LOG_LEVEL', 'WARNING').upper()
LOG_FILE_PATH = os.environ.get('SB_LOG_FILE')

_handlers = [logging.StreamHandler(sys.stderr)]
if LOG_FILE_PATH:
    _handlers.append(logging.FileHandler(LOG_FILE_PATH))

# Configure the logger
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL, logging.WARNING),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=_handlers
)


def get_logger(name):
    """Returns a logger instance with the given name."""
    return logging.getLogger(name)


def set_level(level):
    """Change the level of the smithbar loggers (e.g. from ``--debug``)."""
    logging.getLogger('smithbar').setLevel(level)
