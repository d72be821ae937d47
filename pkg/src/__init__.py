"""Unawareness Checker - Source Package."""

__version__ = "1.0.0"

from . import core_model
from . import operators
from . import properties
from . import dlr_trace
from . import model_io
from . import fuzzing

__all__ = ['core_model', 'operators', 'properties', 'dlr_trace', 'model_io', 'fuzzing']
