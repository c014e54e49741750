"""
Synthetic point cloud generators

Stand-ins for experimental data: circles, unions of circles and tori.
"""

from __future__ import annotations

import numpy as np

from src.utils.errors import ValidationError
from .metric_space import PointCloud


def circle_points(n, rng, center=(0.0, 0.0), radius=1.0, noise=0.0) -> np.ndarray:
    """``n`` points uniform on a circle, with optional Gaussian noise"""
    if n < 1:
        raise ValidationError(f'Need at least one point, got {n}')
    angles = rng.uniform(0.0, 2.0 * np.pi, size=n)
    points = np.column_stack((np.cos(angles), np.sin(angles))) * radius + np.asarray(center, dtype=np.float64)
    if noise > 0:
        points = points + rng.normal(0.0, noise, size=points.shape)
    return points


def sample_circle(n, rng, center=(0.0, 0.0), radius=1.0, noise=0.0) -> PointCloud:
    return PointCloud(circle_points(n, rng, center, radius, noise))


def sample_circles(n_per_circle, rng, centers, radius=1.0, noise=0.0) -> PointCloud:
    """Union of equally sized circle samples, one per center"""
    parts = [circle_points(n_per_circle, rng, c, radius, noise) for c in centers]
    return PointCloud(np.vstack(parts))


def regular_circle(n, radius=1.0, center=(0.0, 0.0)) -> PointCloud:
    """``n`` evenly spaced points on a circle"""
    angles = 2.0 * np.pi * np.arange(n) / n
    points = np.column_stack((np.cos(angles), np.sin(angles))) * radius + np.asarray(center, dtype=np.float64)
    return PointCloud(points)


def sample_torus(n, rng, major=2.0, minor=0.5) -> PointCloud:
    """``n`` points on a torus in R^3 (uniform in both angles)"""
    if not major > minor > 0:
        raise ValidationError('Torus needs major > minor > 0')
    u = rng.uniform(0.0, 2.0 * np.pi, size=n)
    v = rng.uniform(0.0, 2.0 * np.pi, size=n)
    x = (major + minor * np.cos(v)) * np.cos(u)
    y = (major + minor * np.cos(v)) * np.sin(u)
    z = minor * np.sin(v)
    return PointCloud(np.column_stack((x, y, z)))
