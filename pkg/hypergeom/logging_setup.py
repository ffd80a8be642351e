"""
Logging configuration for the hypergeom CLI.

Library modules only call logging.getLogger(__name__); handlers are attached
here, once, by the entry point.
"""

import logging
import sys

from pythonjsonlogger import jsonlogger

from hypergeom import config


def configure_logging(level: str = config.LOG_LEVEL, json_format: bool = config.LOG_JSON) -> None:
    """
    Configure the root logger with a single stderr handler.

    Args:
        level: Logging level name
        json_format: Emit one JSON object per record instead of plain text
    """
    handler = logging.StreamHandler(sys.stderr)
    if json_format:
        handler.setFormatter(jsonlogger.JsonFormatter(config.LOG_FORMAT))
    else:
        handler.setFormatter(logging.Formatter(config.LOG_FORMAT))

    root = logging.getLogger()
    for existing in list(root.handlers):
        root.removeHandler(existing)
    root.addHandler(handler)
    root.setLevel(level.upper())
