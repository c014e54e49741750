"""
Utility modules for the application
"""

from .config import AUTO, EXHAUSTIVE, Config
from .errors import DataError, SchemaError, TDAError, ValidationError
from .fileio import atomic_write, format_float, write_json
from .logger import get_logger, setup_logger
from .rng import generator
from .workers import ordered_map

__all__ = [
    'AUTO', 'EXHAUSTIVE', 'Config',
    'TDAError', 'ValidationError', 'DataError', 'SchemaError',
    'atomic_write', 'write_json', 'format_float',
    'setup_logger', 'get_logger',
    'generator', 'ordered_map',
]
