"""
Persistent homology: diagrams, barcodes and Betti numbers
"""

from .diagram import (
    INFINITE,
    Barcode,
    PersistenceDiagram,
    PersistencePair,
    read_barcode,
    read_diagram,
    write_barcode,
    write_diagram,
)
from .engine import (
    betti_at,
    compute_persistence,
    computed_dimensions,
    diagram_to_barcode,
    h0_pairs_union_find,
    reduce_boundary,
)

__all__ = [
    'INFINITE', 'PersistencePair', 'PersistenceDiagram', 'Barcode',
    'compute_persistence', 'betti_at', 'diagram_to_barcode',
    'computed_dimensions', 'h0_pairs_union_find', 'reduce_boundary',
    'read_diagram', 'write_diagram', 'read_barcode', 'write_barcode',
]
