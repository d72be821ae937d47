"""Tunable limits and logging setup."""

import logging
import sys
from typing import Union

# An event is one machine word.
MAX_STATES = 64

# Largest space quantified over all events, and over all event pairs.
UNARY_CAP = 14
PAIR_CAP = 7

# Largest space whose correspondences can be listed one by one (2^(n*n) models).
CORRESPONDENCE_CAP = 4

DEFAULT_SAMPLES = 4096
DEFAULT_SEED = 0

STRUCTURED_FORMAT_VERSION = 1

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def configure_logging(level: Union[int, str] = logging.WARNING) -> None:
    """Send package logs to stderr; stdout stays reserved for data."""
    root = logging.getLogger("src")
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(level.upper() if isinstance(level, str) else level)
    root.propagate = False
