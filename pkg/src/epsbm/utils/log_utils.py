"""Logging setup for the command line."""

import logging
import sys
from typing import Optional

from epsbm.config.settings import logging_config


def configure_logging(level: Optional[str] = None) -> None:
    """Route epsbm log records to stderr at the given level."""
    logging.basicConfig(
        level=(level or logging_config.level).upper(),
        format=logging_config.format,
        stream=sys.stderr,
        force=True,
    )
