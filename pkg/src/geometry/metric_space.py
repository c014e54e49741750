"""
Point clouds and pairwise distances

Two metric families are supported: the p-distance (Minkowski, p >= 1) and
the maximum distance (Chebyshev).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from src.utils.errors import DataError, ValidationError
from src.utils.fileio import atomic_write, format_float
from src.utils.logger import get_logger
from src.utils.workers import ordered_map

logger = get_logger('geometry')

ROW_BLOCK = 64
PNORM = 'pnorm'
MAXNORM = 'max'


def _as_vectors(x, y):
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.shape != y.shape:
        raise ValidationError(f'Dimension mismatch: {x.shape[0]} vs {y.shape[0]} coordinates')
    return x, y


def p_distance(x, y, p) -> float:
    """(sum |x_i - y_i|^p)^(1/p) for p >= 1"""
    x, y = _as_vectors(x, y)
    p = float(p)
    if not p >= 1.0:
        raise ValidationError(f'p must be >= 1, got {p}')
    diff = np.abs(x - y)
    if math.isinf(p):
        return float(diff.max(initial=0.0))
    if p == 1.0:
        return float(diff.sum())
    return float(np.sum(diff ** p) ** (1.0 / p))


def max_distance(x, y) -> float:
    """max_i |x_i - y_i|"""
    x, y = _as_vectors(x, y)
    return float(np.abs(x - y).max(initial=0.0))


@dataclass(frozen=True)
class Metric:
    """Either PNorm with parameter p >= 1 or MaxNorm"""

    kind: str = PNORM
    p: float = 2.0

    def __post_init__(self):
        if self.kind not in (PNORM, MAXNORM):
            raise ValidationError(f'Unknown metric kind: {self.kind}')
        if self.kind == PNORM and not (float(self.p) >= 1.0 and math.isfinite(self.p)):
            raise ValidationError(f'p must be a finite real >= 1, got {self.p}')

    @classmethod
    def pnorm(cls, p=2.0):
        return cls(PNORM, float(p))

    @classmethod
    def maxnorm(cls):
        return cls(MAXNORM, math.inf)

    @classmethod
    def parse(cls, text):
        """Parse the CLI spelling: ``p1``, ``p2``, ``p<real>`` or ``max``"""
        text = str(text).strip().lower()
        if text in ('max', 'maxnorm', 'inf', 'pinf'):
            return cls.maxnorm()
        if text.startswith('p'):
            try:
                return cls.pnorm(float(text[1:]))
            except ValueError:
                pass
        raise ValidationError(f"Unknown metric '{text}' (expected p1, p2, pN or max)")

    @property
    def name(self):
        if self.kind == MAXNORM:
            return 'max'
        return f'p{self.p:g}'

    def __call__(self, x, y) -> float:
        if self.kind == MAXNORM:
            return max_distance(x, y)
        return p_distance(x, y, self.p)

    def rows(self, block: np.ndarray, points: np.ndarray) -> np.ndarray:
        """Distances from each row of ``block`` to every point"""
        diff = np.abs(block[:, None, :] - points[None, :, :])
        if self.kind == MAXNORM:
            return diff.max(axis=-1, initial=0.0)
        if self.p == 1.0:
            return diff.sum(axis=-1)
        return np.sum(diff ** self.p, axis=-1) ** (1.0 / self.p)


@dataclass(frozen=True, eq=False)
class PointCloud:
    """Finite sample of points in n-dimensional real space"""

    points: np.ndarray

    def __post_init__(self):
        points = np.array(self.points, dtype=np.float64, copy=True)
        if points.ndim != 2:
            raise ValidationError('Point cloud must be a 2-D array of coordinates')
        if points.shape[0] < 1:
            raise ValidationError('Point cloud must contain at least one point')
        if points.shape[1] < 1:
            raise ValidationError('Points must have at least one coordinate')
        if not np.all(np.isfinite(points)):
            raise ValidationError('Point coordinates must be finite real numbers')
        points.setflags(write=False)
        object.__setattr__(self, 'points', points)

    @property
    def size(self) -> int:
        return int(self.points.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.points.shape[1])

    def __len__(self):
        return self.size

    def subsample(self, indices: Sequence[int]) -> 'PointCloud':
        """Cloud made of the given point indices (repeats allowed)"""
        return PointCloud(self.points[np.asarray(indices, dtype=np.intp)])


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Symmetric non-negative matrix with zero diagonal"""

    entries: np.ndarray
    metric: Metric = field(default_factory=Metric)

    def __post_init__(self):
        entries = np.array(self.entries, dtype=np.float64, copy=True)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] < 1:
            raise ValidationError('Distance matrix must be square and non-empty')
        if not np.all(np.isfinite(entries)) or np.any(entries < 0):
            raise ValidationError('Distances must be finite and non-negative')
        if np.any(np.diag(entries) != 0):
            raise ValidationError('Distance matrix must have a zero diagonal')
        if not np.array_equal(entries, entries.T):
            raise ValidationError('Distance matrix must be symmetric')
        entries.setflags(write=False)
        object.__setattr__(self, 'entries', entries)

    @property
    def size(self) -> int:
        return int(self.entries.shape[0])

    def diameter(self) -> float:
        return float(self.entries.max())

    def __getitem__(self, index):
        return self.entries[index]


def distance_matrix(cloud: PointCloud, metric: Metric = None, workers: int = 1) -> DistanceMatrix:
    """
    All pairwise distances of a cloud under ``metric``

    Rows are computed in blocks, optionally on a thread pool; only the upper
    triangle is kept and mirrored so the result is exactly symmetric.
    """
    metric = metric or Metric()
    points = cloud.points
    starts = range(0, cloud.size, ROW_BLOCK)
    blocks = ordered_map(lambda s: metric.rows(points[s:s + ROW_BLOCK], points), starts, workers)
    full = np.vstack(blocks)
    upper = np.triu(full, k=1)
    entries = upper + upper.T
    logger.debug('Distance matrix %dx%d under %s', cloud.size, cloud.size, metric.name)
    return DistanceMatrix(entries, metric)


def read_point_cloud(path, delimiter=',', skip_header=False) -> PointCloud:
    """
    Read a point cloud CSV: one point per row, decimal coordinates

    Raises:
        DataError: unreadable file, non-numeric field, ragged rows or an empty file
    """
    rows = []
    width = None
    try:
        with open(path, 'r', encoding='utf-8', newline='') as handle:
            reader = csv.reader(handle, delimiter=delimiter)
            for line_no, row in enumerate(reader, start=1):
                if skip_header and line_no == 1:
                    continue
                if not row or all(not field.strip() for field in row):
                    continue
                try:
                    coords = [float(field) for field in row]
                except ValueError:
                    raise DataError(f'non-numeric coordinate in row {row!r}', path, line_no) from None
                if not all(math.isfinite(c) for c in coords):
                    raise DataError('coordinates must be finite', path, line_no)
                if width is None:
                    width = len(coords)
                elif len(coords) != width:
                    raise DataError(f'expected {width} coordinates, found {len(coords)}', path, line_no)
                rows.append(coords)
    except OSError as exc:
        raise DataError(f'cannot read point cloud: {exc.strerror or exc}', path) from exc
    except UnicodeDecodeError as exc:
        raise DataError(f'not valid UTF-8: {exc}', path) from exc
    if not rows:
        raise DataError('point cloud file contains no points', path)
    return PointCloud(np.array(rows, dtype=np.float64))


def write_point_cloud(path, cloud: PointCloud, delimiter=','):
    """Write a cloud as CSV with shortest round-trip floats"""
    with atomic_write(path, newline='') as handle:
        writer = csv.writer(handle, delimiter=delimiter, lineterminator='\n')
        for point in cloud.points:
            writer.writerow([format_float(c) for c in point])
