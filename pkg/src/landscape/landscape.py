"""
Persistence landscapes

A landscape is stored exactly: each level is the sorted list of its
breakpoints (t, value), linear in between and zero outside the first and
last breakpoint. Levels are built by a single sweep over the pairs sorted
by (birth ascending, death descending); the part of a tent hidden under the
current level is re-inserted into the queue for the next level.
"""

from __future__ import annotations

import bisect
import csv
import json
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.persistence.diagram import PersistenceDiagram
from src.utils.errors import DataError, SchemaError, ValidationError
from src.utils.fileio import atomic_write, format_float
from src.utils.logger import get_logger

logger = get_logger('landscape')


def _as_level(points) -> np.ndarray:
    level = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    if level.shape[0] and np.any(np.diff(level[:, 0]) < 0):
        raise ValidationError('Landscape breakpoints must be sorted by t')
    level = level.copy()
    level.setflags(write=False)
    return level


@dataclass(frozen=True, eq=False)
class PersistenceLandscape:
    """Ordered levels lambda_1 >= lambda_2 >= ... of one homology dimension"""

    homology_dimension: int
    levels: Tuple[np.ndarray, ...]
    domain_cap: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, 'levels', tuple(_as_level(level) for level in self.levels))

    def __len__(self):
        return len(self.levels)

    def level(self, k) -> np.ndarray:
        """Breakpoints of lambda_{k+1} (0-based); an empty array past the last level"""
        if k < len(self.levels):
            return self.levels[k]
        return np.empty((0, 2))

    def evaluate(self, t, k=None) -> np.ndarray:
        """Values of every level (or of level ``k``) at the points ``t``"""
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        ks = range(len(self.levels)) if k is None else [k]
        rows = [_interp(t, self.level(i)) for i in ks]
        if not rows:
            return np.zeros((0, t.shape[0]))
        return np.vstack(rows)

    def breakpoints(self) -> np.ndarray:
        if not self.levels:
            return np.empty(0)
        return np.unique(np.concatenate([level[:, 0] for level in self.levels]))

    def is_ordered(self, atol=1e-12) -> bool:
        """lambda_k >= lambda_{k+1} at every breakpoint of either level"""
        for k in range(len(self.levels) - 1):
            t = np.union1d(self.levels[k][:, 0], self.levels[k + 1][:, 0])
            if np.any(_interp(t, self.levels[k]) < _interp(t, self.levels[k + 1]) - atol):
                return False
        return True

    def to_dict(self) -> dict:
        return {
            'dim': self.homology_dimension,
            'cap': self.domain_cap,
            'levels': [[[float(t), float(v)] for t, v in level] for level in self.levels],
        }


def _interp(t: np.ndarray, level: np.ndarray) -> np.ndarray:
    if level.shape[0] == 0:
        return np.zeros_like(t, dtype=np.float64)
    return np.interp(t, level[:, 0], level[:, 1], left=0.0, right=0.0)


def _sweep_levels(points: np.ndarray) -> List[List[Tuple[float, float]]]:
    """Exact breakpoints of every level for off-diagonal (birth, death) points"""
    queue = sorted(((float(b), float(d)) for b, d in points), key=lambda bd: (bd[0], -bd[1]))
    keys = [(b, -d) for b, d in queue]
    levels = []
    while queue:
        b, d = queue.pop(0)
        keys.pop(0)
        level = [(b, 0.0), ((b + d) / 2.0, (d - b) / 2.0)]
        p = 0
        while True:
            nxt = next((i for i in range(p, len(queue)) if queue[i][1] > d), None)
            if nxt is None:
                level.append((d, 0.0))
                break
            b2, d2 = queue.pop(nxt)
            keys.pop(nxt)
            p = nxt
            if b2 > d:
                level.append((d, 0.0))
            if b2 >= d:
                level.append((b2, 0.0))
            else:
                level.append(((b2 + d) / 2.0, (d - b2) / 2.0))
                # The hidden remainder (b2, d) competes for the next level.
                pos = bisect.bisect_right(keys, (b2, -d), lo=p)
                queue.insert(pos, (b2, d))
                keys.insert(pos, (b2, -d))
            level.append(((b2 + d2) / 2.0, (d2 - b2) / 2.0))
            b, d = b2, d2
        deduped = [level[0]]
        for point in level[1:]:
            if point[0] != deduped[-1][0]:
                deduped.append(point)
        levels.append(deduped)
    return levels


def landscape_from_diagram(d: PersistenceDiagram, h: int, cap=None) -> PersistenceLandscape:
    """
    Exact landscape of the dimension-h pairs of a diagram

    lambda_k(t) is the k-th largest of max(0, min(t - b_i, d_i - t)). Infinite
    deaths are truncated at ``cap`` (default: the diagram's max_scale), which
    becomes the landscape's domain_cap.
    """
    d.require(h)
    domain_cap = d.resolve_cap(cap)
    points = d.off_diagonal(h, domain_cap)
    levels = _sweep_levels(points)
    logger.debug('Landscape H%d: %d pairs -> %d levels', h, points.shape[0], len(levels))
    return PersistenceLandscape(h, tuple(np.array(level) for level in levels), domain_cap)


def _check_compatible(sample: Sequence[PersistenceLandscape]):
    if not sample:
        raise ValidationError('Need a non-empty sample of landscapes')
    dims = {L.homology_dimension for L in sample}
    if len(dims) > 1:
        raise ValidationError(f'Landscapes mix homology dimensions {sorted(dims)}')
    caps = {L.domain_cap for L in sample}
    if len(caps) > 1:
        raise ValidationError(f'Landscapes have different domain caps {sorted(caps, key=str)}')


def mean_landscape(sample: Sequence[PersistenceLandscape]) -> PersistenceLandscape:
    """Pointwise mean of every level, exact on the union of breakpoints"""
    sample = list(sample)
    _check_compatible(sample)
    n = len(sample)
    depth = max(len(L) for L in sample)
    levels = []
    for k in range(depth):
        grid = np.unique(np.concatenate([L.level(k)[:, 0] for L in sample]))
        values = np.vstack([_interp(grid, L.level(k)) for L in sample])
        first = values[0]
        mean = first + (values - first).sum(axis=0) / n
        levels.append(np.column_stack((grid, mean)))
    return PersistenceLandscape(sample[0].homology_dimension, tuple(levels), sample[0].domain_cap)


def _trapezoid(level: np.ndarray) -> float:
    if level.shape[0] < 2:
        return 0.0
    t, v = level[:, 0], level[:, 1]
    return float(np.sum((t[1:] - t[:-1]) * (v[1:] + v[:-1])) / 2.0)


def level_integrals(L: PersistenceLandscape) -> np.ndarray:
    """Integral of each level"""
    return np.array([_trapezoid(level) for level in L.levels])


def landscape_integral(L: PersistenceLandscape) -> float:
    """sum_k of the integral of lambda_k: total area under all levels"""
    return float(sum(_trapezoid(level) for level in L.levels))


def _segment_abs_power(a: np.ndarray, b: np.ndarray, dt: np.ndarray, p: float) -> float:
    """Exact integral of |linear|^p over segments with end values a, b"""
    if p == 1:
        same = a * b >= 0
        total = np.where(same, np.abs(a + b) / 2.0, 0.0)
        denom = np.abs(a) + np.abs(b)
        crossing = np.where(~same & (denom > 0), (a * a + b * b) / (2.0 * np.where(denom > 0, denom, 1.0)), 0.0)
        return float(np.sum((total + crossing) * dt))
    return float(np.sum((a * a + a * b + b * b) / 3.0 * dt))


def landscape_distance(L1: PersistenceLandscape, L2: PersistenceLandscape, p=1) -> float:
    """
    L^p distance between landscapes: (sum_k integral |lambda_k - mu_k|^p)^(1/p)

    Exact for p in {1, 2, inf}.
    """
    _check_compatible([L1, L2])
    if p not in (1, 2) and not (isinstance(p, float) and math.isinf(p)):
        raise ValidationError(f'Landscape distance supports p = 1, 2 or inf, got {p}')
    depth = max(len(L1), len(L2))
    total = 0.0
    for k in range(depth):
        grid = np.union1d(L1.level(k)[:, 0], L2.level(k)[:, 0])
        if grid.shape[0] == 0:
            continue
        diff = _interp(grid, L1.level(k)) - _interp(grid, L2.level(k))
        if math.isinf(p):
            total = max(total, float(np.abs(diff).max()))
            continue
        total += _segment_abs_power(diff[:-1], diff[1:], np.diff(grid), p)
    if math.isinf(p):
        return total
    return total ** (1.0 / p)


def landscape_norm(L: PersistenceLandscape, p=1) -> float:
    return landscape_distance(L, PersistenceLandscape(L.homology_dimension, (), L.domain_cap), p)


def grid_values(L: PersistenceLandscape, resolution: int, t_min=None, t_max=None):
    """
    Sample every level on a regular grid (plotting and CSV export only)

    Returns:
        (t, values) with values shaped (levels, resolution + 1)
    """
    if resolution < 1:
        raise ValidationError(f'Grid resolution must be >= 1, got {resolution}')
    bounds = L.breakpoints()
    if t_min is None:
        t_min = 0.0 if L.domain_cap is not None or bounds.size == 0 else float(bounds.min())
    if t_max is None:
        if L.domain_cap is not None:
            t_max = L.domain_cap
        else:
            t_max = float(bounds.max()) if bounds.size else 1.0
    t = np.linspace(t_min, t_max, resolution + 1)
    return t, L.evaluate(t)


def write_landscape_json(path, L: PersistenceLandscape):
    with atomic_write(path) as handle:
        json.dump(L.to_dict(), handle, indent=2)
        handle.write('\n')


def read_landscape_json(path) -> PersistenceLandscape:
    try:
        with open(path, 'r', encoding='utf-8') as handle:
            payload = json.load(handle)
    except OSError as exc:
        raise DataError(f'cannot read landscape: {exc.strerror or exc}', path) from exc
    except json.JSONDecodeError as exc:
        raise DataError(f'invalid JSON: {exc.msg}', path, exc.lineno) from exc
    if not isinstance(payload, dict) or not {'dim', 'cap', 'levels'} <= set(payload):
        raise SchemaError('landscape JSON needs dim, cap and levels', path)
    try:
        levels = tuple(np.array(level, dtype=np.float64).reshape(-1, 2) for level in payload['levels'])
        return PersistenceLandscape(int(payload['dim']), levels, payload['cap'])
    except (TypeError, ValueError) as exc:
        raise DataError(f'malformed landscape levels: {exc}', path) from exc


def write_grid_csv(path, L: PersistenceLandscape, resolution: int):
    """CSV with columns t, λ1, λ2, ... sampled at ``resolution`` intervals"""
    t, values = grid_values(L, resolution)
    with atomic_write(path, newline='') as handle:
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(['t'] + [f'λ{k + 1}' for k in range(values.shape[0])])
        for i, ti in enumerate(t):
            writer.writerow([format_float(ti)] + [format_float(v) for v in values[:, i]])
