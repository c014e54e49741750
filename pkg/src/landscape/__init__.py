"""
Persistence landscapes: construction, means, integrals and distances
"""

from .landscape import (
    PersistenceLandscape,
    grid_values,
    landscape_distance,
    landscape_from_diagram,
    landscape_integral,
    landscape_norm,
    level_integrals,
    mean_landscape,
    read_landscape_json,
    write_grid_csv,
    write_landscape_json,
)

__all__ = [
    'PersistenceLandscape',
    'landscape_from_diagram', 'mean_landscape', 'landscape_integral', 'level_integrals',
    'landscape_distance', 'landscape_norm', 'grid_values',
    'write_landscape_json', 'read_landscape_json', 'write_grid_csv',
]
