"""
Metrics and moments on the space of persistence diagrams
"""

from .distances import (
    DIAGONAL,
    Matching,
    bottleneck,
    common_cap,
    match_points,
    optimal_matching,
    pairwise_wasserstein,
    wasserstein,
)
from .frechet import FrechetResult, frechet_functional, frechet_mean

__all__ = [
    'DIAGONAL', 'Matching', 'FrechetResult',
    'wasserstein', 'bottleneck', 'optimal_matching', 'match_points',
    'pairwise_wasserstein', 'common_cap',
    'frechet_mean', 'frechet_functional',
]
