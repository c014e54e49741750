"""
Wasserstein and bottleneck distances between persistence diagrams

Matchings use the infinity norm between diagram points. Each diagram is
augmented with the diagonal projections of the other's points, giving a
square assignment problem solved exactly with the Hungarian method.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from src.persistence.diagram import PersistenceDiagram
from src.utils.errors import ValidationError
from src.utils.logger import get_logger
from src.utils.workers import ordered_map

logger = get_logger('statistics')

DIAGONAL = 'diagonal'
Slot = Union[int, str]


def common_cap(diagrams: Sequence[PersistenceDiagram], h: int, cap=None) -> Optional[float]:
    """
    Truncation cap shared by ``diagrams`` in dimension ``h``

    An explicit ``cap`` wins. Otherwise, when any diagram has an infinite
    death in ``h``, every diagram must report the same max_scale.
    """
    for diagram in diagrams:
        diagram.require(h)
    if cap is not None:
        cap = float(cap)
        if not (cap > 0 and math.isfinite(cap)):
            raise ValidationError(f'Truncation cap must be a positive real, got {cap}')
        return cap
    if not any(d.has_infinite(h) for d in diagrams):
        return None
    caps = {d.max_scale for d in diagrams}
    if None in caps:
        raise ValidationError('Infinite deaths present but a diagram has no max_scale to truncate at')
    if len(caps) > 1:
        raise ValidationError(f'Diagrams have different truncation caps: {sorted(caps)}')
    return caps.pop()


def diagonal_distance(points: np.ndarray) -> np.ndarray:
    """Infinity-norm distance of each (birth, death) point to the diagonal"""
    return (points[:, 1] - points[:, 0]) / 2.0


def diagonal_projection(points: np.ndarray) -> np.ndarray:
    mid = (points[:, 0] + points[:, 1]) / 2.0
    return np.column_stack((mid, mid))


def linf_costs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Infinity-norm distances between every row of ``a`` and every row of ``b``"""
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((a.shape[0], b.shape[0]))
    return np.abs(a[:, None, :] - b[None, :, :]).max(axis=-1)


def augmented_costs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    Square (n+m) cost matrix of unpowered infinity-norm costs

    Rows: points of ``a`` then diagonal slots for ``b``.
    Columns: points of ``b`` then diagonal slots for ``a``.
    """
    n, m = a.shape[0], b.shape[0]
    costs = np.zeros((n + m, n + m))
    costs[:n, :m] = linf_costs(a, b)
    costs[:n, m:] = diagonal_distance(a)[:, None]
    costs[n:, :m] = diagonal_distance(b)[None, :]
    return costs


@dataclass(frozen=True)
class Matching:
    """Optimal partial matching between two diagrams' off-diagonal points"""

    pairs: Tuple[Tuple[Slot, Slot, float], ...]
    cost: float
    p: float
    first: np.ndarray = field(repr=False, compare=False, default=None)
    second: np.ndarray = field(repr=False, compare=False, default=None)

    @property
    def distance(self) -> float:
        return self.cost ** (1.0 / self.p) if self.cost > 0 else 0.0

    def recomputed_cost(self) -> float:
        """Objective recomputed from the assignments"""
        total = 0.0
        for i, j, _ in self.pairs:
            if i == DIAGONAL:
                c = diagonal_distance(self.second[[j]])[0]
            elif j == DIAGONAL:
                c = diagonal_distance(self.first[[i]])[0]
            else:
                c = float(np.abs(self.first[i] - self.second[j]).max())
            total += c ** self.p
        return total

    def to_dict(self) -> dict:
        return {
            'p': self.p,
            'cost': self.cost,
            'distance': self.distance,
            'assignments': [{'first': i, 'second': j, 'cost': c} for i, j, c in self.pairs],
        }


def match_points(a: np.ndarray, b: np.ndarray, p: float = 2.0) -> Matching:
    """Optimal W_p matching between two arrays of off-diagonal (birth, death) points"""
    p = float(p)
    if not (p >= 1 and math.isfinite(p)):
        raise ValidationError(f'p must be a finite real >= 1, got {p}')
    n, m = a.shape[0], b.shape[0]
    if n + m == 0:
        return Matching((), 0.0, p, a, b)
    base = augmented_costs(a, b)
    rows, cols = linear_sum_assignment(base ** p)
    pairs: List[Tuple[Slot, Slot, float]] = []
    total = 0.0
    for r, c in zip(rows.tolist(), cols.tolist()):
        if r >= n and c >= m:
            continue
        first: Slot = r if r < n else DIAGONAL
        second: Slot = c if c < m else DIAGONAL
        cost = float(base[r, c])
        pairs.append((first, second, cost))
        total += cost ** p
    return Matching(tuple(pairs), total, p, a, b)


def _prepared(d1, d2, h, cap):
    cap = common_cap((d1, d2), h, cap)
    return d1.off_diagonal(h, cap), d2.off_diagonal(h, cap)


def optimal_matching(d1: PersistenceDiagram, d2: PersistenceDiagram, h: int,
                     p: float = 2.0, cap=None) -> Matching:
    """Optimal matching between the dimension-h off-diagonal points of two diagrams"""
    a, b = _prepared(d1, d2, h, cap)
    return match_points(a, b, p)


def wasserstein(d1: PersistenceDiagram, d2: PersistenceDiagram, h: int,
                p: float = 2.0, cap=None) -> float:
    """
    p-Wasserstein distance with infinity-norm ground cost

    Args:
        d1, d2: Diagrams covering dimension h
        h: Homology dimension
        p: Order, a finite real >= 1
        cap: Truncation of infinite deaths; defaults to the diagrams' common max_scale

    Returns:
        (min over matchings of sum ||x - gamma(x)||_inf^p)^(1/p)
    """
    return optimal_matching(d1, d2, h, p, cap).distance


def bottleneck_points(a: np.ndarray, b: np.ndarray) -> float:
    """Smallest t admitting a perfect matching with every cost <= t"""
    n, m = a.shape[0], b.shape[0]
    if n + m == 0:
        return 0.0
    costs = augmented_costs(a, b)
    candidates = np.unique(costs)
    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _has_perfect_matching(costs <= candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(candidates[lo])


def _has_perfect_matching(allowed: np.ndarray) -> bool:
    graph = csr_matrix(allowed.astype(np.int8))
    matched = maximum_bipartite_matching(graph, perm_type='column')
    return bool(np.all(matched >= 0))


def bottleneck(d1: PersistenceDiagram, d2: PersistenceDiagram, h: int, cap=None) -> float:
    """Bottleneck distance: min over matchings of the largest infinity-norm cost"""
    a, b = _prepared(d1, d2, h, cap)
    return bottleneck_points(a, b)


def pairwise_wasserstein(sample: Sequence[PersistenceDiagram], h: int, p: float = 2.0,
                         cap=None, workers: int = 1, powered: bool = False) -> np.ndarray:
    """Symmetric matrix of W_p distances (or W_p^p when ``powered``) between every pair"""
    cap = common_cap(sample, h, cap)
    points = [d.off_diagonal(h, cap) for d in sample]
    count = len(points)
    index_pairs = [(i, j) for i in range(count) for j in range(i + 1, count)]
    values = ordered_map(lambda ij: _pair_value(match_points(points[ij[0]], points[ij[1]], p), powered),
                         index_pairs, workers)
    matrix = np.zeros((count, count))
    for (i, j), value in zip(index_pairs, values):
        matrix[i, j] = matrix[j, i] = value
    logger.debug('Pairwise W_%s matrix for %d diagrams in H%d', p, count, h)
    return matrix


def _pair_value(matching: Matching, powered: bool) -> float:
    return matching.cost if powered else matching.distance
