"""
Vietoris-Rips filtrations over a distance matrix
"""

from .rips import (
    Filtration,
    Simplex,
    build_rips,
    complex_at_scale,
    is_valid_order,
    read_filtration,
    resolve_max_scale,
    write_filtration,
)

__all__ = [
    'Simplex', 'Filtration',
    'build_rips', 'complex_at_scale', 'resolve_max_scale',
    'write_filtration', 'read_filtration', 'is_valid_order',
]
