"""
Point clouds, metrics and distance matrices
"""

from .metric_space import (
    DistanceMatrix,
    Metric,
    PointCloud,
    distance_matrix,
    max_distance,
    p_distance,
    read_point_cloud,
    write_point_cloud,
)
from .samples import regular_circle, sample_circle, sample_circles, sample_torus

__all__ = [
    'PointCloud', 'Metric', 'DistanceMatrix',
    'p_distance', 'max_distance', 'distance_matrix',
    'read_point_cloud', 'write_point_cloud',
    'sample_circle', 'sample_circles', 'regular_circle', 'sample_torus',
]
