"""
Vietoris-Rips filtration

Simplices enter at the largest pairwise distance among their vertices
(closed threshold: d <= epsilon) and are stored in the total order
(value, dimension, lexicographic vertices), which puts every face before
its cofaces.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, List, Sequence, Tuple

import numpy as np

from src.geometry.metric_space import DistanceMatrix
from src.utils.errors import DataError, ValidationError
from src.utils.fileio import atomic_write, format_float
from src.utils.logger import get_logger
from src.utils.workers import ordered_map

logger = get_logger('filtration')

DEFAULT_MAX_DIMENSION = 2


class Simplex(tuple):
    """Strictly increasing tuple of vertex indices"""

    def __new__(cls, vertices):
        vertices = tuple(int(v) for v in vertices)
        if not vertices:
            raise ValidationError('A simplex needs at least one vertex')
        if vertices[0] < 0 or any(a >= b for a, b in zip(vertices, vertices[1:])):
            raise ValidationError(f'Simplex vertices must be strictly increasing and non-negative: {vertices}')
        return super().__new__(cls, vertices)

    @property
    def vertices(self) -> Tuple[int, ...]:
        return tuple(self)

    @property
    def dimension(self) -> int:
        return len(self) - 1

    def faces(self) -> List['Simplex']:
        """Codimension-one faces, empty for a vertex"""
        if len(self) == 1:
            return []
        return [Simplex(self[:i] + self[i + 1:]) for i in range(len(self))]


def filtration_key(simplex, value):
    return (value, len(simplex), tuple(simplex))


@dataclass(frozen=True, eq=False)
class Filtration:
    """Rips filtration up to ``max_dimension`` and ``max_scale``"""

    simplices: Tuple[Simplex, ...]
    values: np.ndarray
    max_dimension: int
    max_scale: float

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64, copy=True)
        if values.shape != (len(self.simplices),):
            raise ValidationError('One filtration value per simplex is required')
        if self.max_dimension < 0:
            raise ValidationError(f'max_dimension must be >= 0, got {self.max_dimension}')
        if not (self.max_scale > 0 and math.isfinite(self.max_scale)):
            raise ValidationError(f'max_scale must be a positive real, got {self.max_scale}')
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    def __len__(self):
        return len(self.simplices)

    def __iter__(self) -> Iterator[Tuple[Simplex, float]]:
        return iter(zip(self.simplices, self.values.tolist()))

    @property
    def vertex_count(self) -> int:
        return sum(1 for s in self.simplices if len(s) == 1)

    def simplex_counts(self) -> dict:
        """Number of simplices per dimension"""
        counts = Counter(len(s) - 1 for s in self.simplices)
        return {dim: counts.get(dim, 0) for dim in range(self.max_dimension + 1)}


def resolve_max_scale(dm: DistanceMatrix, max_scale=None) -> float:
    """Explicit scale, or the diameter (1.0 for a zero-diameter cloud)"""
    if max_scale is None:
        diameter = dm.diameter()
        return diameter if diameter > 0 else 1.0
    max_scale = float(max_scale)
    if not (max_scale > 0 and math.isfinite(max_scale)):
        raise ValidationError(f'max_scale must be a positive real, got {max_scale}')
    return max_scale


def build_rips(dm: DistanceMatrix, max_dimension: int = DEFAULT_MAX_DIMENSION,
               max_scale: float = None, workers: int = 1) -> Filtration:
    """
    Vietoris-Rips filtration of a distance matrix

    Cliques of the max_scale neighbourhood graph are grown vertex by vertex
    through intersections of upper-neighbour sets, so only simplices that
    pass the threshold are ever visited.

    Args:
        dm: Pairwise distances
        max_dimension: Largest simplex dimension to include (>= 0)
        max_scale: Largest filtration value; None means the diameter
        workers: Threads used for the per-vertex expansion

    Returns:
        Filtration sorted by (value, dimension, vertices)
    """
    if int(max_dimension) != max_dimension or max_dimension < 0:
        raise ValidationError(f'max_dimension must be a non-negative integer, got {max_dimension}')
    max_dimension = int(max_dimension)
    max_scale = resolve_max_scale(dm, max_scale)

    n = dm.size
    dist = dm.entries.tolist()
    adjacency = dm.entries <= max_scale
    upper = [frozenset(int(w) for w in np.flatnonzero(adjacency[v, v + 1:]) + v + 1) for v in range(n)]
    max_size = max_dimension + 1

    def expand_from(start):
        found = []
        stack = [((start,), upper[start], 0.0)]
        while stack:
            simplex, candidates, value = stack.pop()
            found.append((simplex, value))
            if len(simplex) == max_size:
                continue
            for w in sorted(candidates, reverse=True):
                row = dist[w]
                new_value = max(value, max(row[u] for u in simplex))
                stack.append((simplex + (w,), candidates & upper[w], new_value))
        return found

    chunks = ordered_map(expand_from, range(n), workers)
    entries = [item for chunk in chunks for item in chunk]
    entries.sort(key=lambda item: filtration_key(item[0], item[1]))

    simplices = tuple(tuple.__new__(Simplex, s) for s, _ in entries)
    values = np.fromiter((v for _, v in entries), dtype=np.float64, count=len(entries))
    filtration = Filtration(simplices, values, max_dimension, max_scale)
    logger.debug('Rips filtration: %d simplices %s up to scale %s',
                 len(filtration), filtration.simplex_counts(), max_scale)
    return filtration


def complex_at_scale(f: Filtration, epsilon: float) -> List[Simplex]:
    """Simplices with filtration value <= epsilon"""
    epsilon = float(epsilon)
    if epsilon < 0 or math.isnan(epsilon):
        raise ValidationError(f'epsilon must be non-negative, got {epsilon}')
    if epsilon > f.max_scale:
        raise ValidationError(f'epsilon {epsilon} exceeds the filtration max_scale {f.max_scale}')
    stop = int(np.searchsorted(f.values, epsilon, side='right'))
    return list(f.simplices[:stop])


def write_filtration(path, f: Filtration):
    """One simplex per line, ``value v0 v1 ... vk``, in filtration order"""
    with atomic_write(path) as handle:
        handle.write(f'# max_dimension={f.max_dimension} max_scale={format_float(f.max_scale)}\n')
        for simplex, value in f:
            handle.write(' '.join([format_float(value)] + [str(v) for v in simplex]) + '\n')


def _read_header(line, path, line_no):
    """``max_dimension`` and ``max_scale`` values of a ``#`` comment line"""
    found = {}
    for token in line[1:].split():
        key, _, raw = token.partition('=')
        if key == 'max_dimension':
            try:
                found[key] = int(raw)
            except ValueError:
                raise DataError(f'malformed max_dimension {raw!r}', path, line_no) from None
            if found[key] < 0:
                raise DataError(f'max_dimension must be >= 0, got {raw!r}', path, line_no)
        elif key == 'max_scale':
            try:
                found[key] = float(raw)
            except ValueError:
                raise DataError(f'malformed max_scale {raw!r}', path, line_no) from None
            if not (found[key] > 0 and math.isfinite(found[key])):
                raise DataError(f'max_scale must be a positive real, got {raw!r}', path, line_no)
    return found


def read_filtration(path) -> Filtration:
    """Inverse of :func:`write_filtration`"""
    simplices: List[Simplex] = []
    values: List[float] = []
    header = {}
    try:
        with open(path, 'r', encoding='utf-8') as handle:
            for line_no, line in enumerate(handle, start=1):
                line = line.strip()
                if not line:
                    continue
                if line.startswith('#'):
                    header.update(_read_header(line, path, line_no))
                    continue
                fields = line.split()
                try:
                    values.append(float(fields[0]))
                    simplices.append(Simplex(int(v) for v in fields[1:]))
                except (ValueError, IndexError) as exc:
                    raise DataError(f'malformed simplex line: {exc}', path, line_no) from None
    except OSError as exc:
        raise DataError(f'cannot read filtration: {exc.strerror or exc}', path) from exc
    max_dimension = header.get('max_dimension', max((len(s) - 1 for s in simplices), default=0))
    max_scale = header.get('max_scale', max(values, default=0.0) or 1.0)
    try:
        return Filtration(tuple(simplices), np.array(values), max_dimension, max_scale)
    except ValidationError as exc:
        raise DataError(str(exc), path) from exc


def is_valid_order(simplices: Sequence[Simplex], values: Sequence[float]) -> bool:
    """True when every face precedes its cofaces with a value no larger"""
    position = {tuple(s): i for i, s in enumerate(simplices)}
    for i, simplex in enumerate(simplices):
        for face in Simplex(simplex).faces():
            j = position.get(tuple(face))
            if j is None or j >= i or values[j] > values[i]:
                return False
    return True
