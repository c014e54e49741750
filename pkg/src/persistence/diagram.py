"""
Persistence diagrams and barcodes
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Tuple

import numpy as np

from src.utils.errors import DataError, SchemaError, ValidationError
from src.utils.fileio import atomic_write, format_float

# Death value of classes still alive at max_scale. Never replaced by max_scale
# inside a diagram; consumers truncate explicitly.
INFINITE = math.inf

DIAGRAM_HEADER = ['dim', 'birth', 'death']


class PersistencePair(NamedTuple):
    """Birth and death scale of one homology class"""

    dimension: int
    birth: float
    death: float

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.death)

    @property
    def persistence(self) -> float:
        return self.death - self.birth


def _canonical_pairs(pairs: Iterable) -> Tuple[PersistencePair, ...]:
    result = []
    for pair in pairs:
        dim, birth, death = int(pair[0]), float(pair[1]), float(pair[2])
        if dim < 0:
            raise ValidationError(f'Homology dimension must be >= 0, got {dim}')
        if not math.isfinite(birth) or birth < 0:
            raise ValidationError(f'Birth must be a finite non-negative real, got {birth}')
        if math.isnan(death) or death == -math.inf:
            raise ValidationError(f'Invalid death value {death}')
        if death < birth:
            raise ValidationError(f'Death {death} precedes birth {birth}')
        result.append(PersistencePair(dim, birth, death))
    result.sort()
    return tuple(result)


@dataclass(frozen=True, init=False)
class PersistenceDiagram:
    """
    Multiset of (dimension, birth, death) pairs plus the implicit diagonal

    ``max_scale`` is the scale of the filtration the diagram came from (None
    when unknown); it is the default cap used to truncate infinite deaths.
    """

    pairs: Tuple[PersistencePair, ...]
    homology_dimensions: Tuple[int, ...]
    max_scale: Optional[float] = None

    def __init__(self, pairs=(), homology_dimensions=None, max_scale=None):
        pairs = _canonical_pairs(pairs)
        if homology_dimensions is None:
            homology_dimensions = sorted({p.dimension for p in pairs}) or [0]
        homology_dimensions = tuple(sorted({int(h) for h in homology_dimensions}))
        stray = {p.dimension for p in pairs} - set(homology_dimensions)
        if stray:
            raise ValidationError(f'Pairs in dimensions {sorted(stray)} outside {homology_dimensions}')
        if max_scale is not None:
            max_scale = float(max_scale)
            if not (max_scale > 0 and math.isfinite(max_scale)):
                raise ValidationError(f'max_scale must be a positive real, got {max_scale}')
        object.__setattr__(self, 'pairs', pairs)
        object.__setattr__(self, 'homology_dimensions', homology_dimensions)
        object.__setattr__(self, 'max_scale', max_scale)

    @classmethod
    def from_points(cls, points, h=0, max_scale=None, homology_dimensions=None):
        """Diagram with the (birth, death) rows of ``points`` in dimension ``h``"""
        points = np.asarray(points, dtype=np.float64).reshape(-1, 2)
        dims = homology_dimensions if homology_dimensions is not None else (h,)
        return cls([(h, b, d) for b, d in points], dims, max_scale)

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def require(self, h):
        if h not in self.homology_dimensions:
            raise ValidationError(
                f'Homology dimension {h} not computed (available: {list(self.homology_dimensions)})')

    def in_dimension(self, h) -> Tuple[PersistencePair, ...]:
        self.require(h)
        return tuple(p for p in self.pairs if p.dimension == h)

    def count(self, h) -> int:
        return len(self.in_dimension(h))

    def points(self, h) -> np.ndarray:
        """(k, 2) array of (birth, death); infinite deaths kept as inf"""
        pairs = self.in_dimension(h)
        return np.array([(p.birth, p.death) for p in pairs], dtype=np.float64).reshape(-1, 2)

    def has_infinite(self, h=None) -> bool:
        return any(p.is_infinite for p in self.pairs if h is None or p.dimension == h)

    def resolve_cap(self, cap=None) -> Optional[float]:
        return float(cap) if cap is not None else self.max_scale

    def finite_points(self, h, cap=None) -> np.ndarray:
        """Points of dimension ``h`` with infinite deaths truncated at ``cap`` (default max_scale)"""
        points = self.points(h)
        if np.isinf(points[:, 1]).any():
            cap = self.resolve_cap(cap)
            if cap is None:
                raise ValidationError('Diagram has infinite deaths but no truncation cap is known')
            births = points[:, 0]
            points = points.copy()
            points[:, 1] = np.where(np.isinf(points[:, 1]), np.maximum(cap, births), points[:, 1])
        return points

    def off_diagonal(self, h, cap=None) -> np.ndarray:
        """Truncated points with death > birth"""
        points = self.finite_points(h, cap)
        return points[points[:, 1] > points[:, 0]]

    def truncated(self, cap=None) -> 'PersistenceDiagram':
        """Copy with every infinite death replaced by ``cap`` (default max_scale)"""
        cap = self.resolve_cap(cap)
        if cap is None:
            raise ValidationError('No truncation cap given and diagram max_scale unknown')
        pairs = [(p.dimension, p.birth, max(cap, p.birth) if p.is_infinite else p.death) for p in self.pairs]
        return PersistenceDiagram(pairs, self.homology_dimensions, self.max_scale)

    def filter_persistence(self, threshold) -> 'PersistenceDiagram':
        """Pairs with death - birth >= threshold"""
        kept = [p for p in self.pairs if p.persistence >= threshold]
        return PersistenceDiagram(kept, self.homology_dimensions, self.max_scale)


@dataclass(frozen=True)
class Barcode:
    """Multiset of (dimension, start, end) intervals with start < end"""

    intervals: Tuple[PersistencePair, ...]
    homology_dimensions: Tuple[int, ...] = (0,)

    def __post_init__(self):
        intervals = _canonical_pairs(self.intervals)
        for bar in intervals:
            if not bar.death > bar.birth:
                raise ValidationError(f'Zero-length interval {bar} not allowed in a barcode')
        object.__setattr__(self, 'intervals', intervals)
        object.__setattr__(self, 'homology_dimensions', tuple(sorted(set(self.homology_dimensions))))

    def __len__(self):
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def count(self, h=None) -> int:
        return sum(1 for bar in self.intervals if h is None or bar.dimension == h)

    def alive_at(self, h, epsilon) -> int:
        return sum(1 for bar in self.intervals
                   if bar.dimension == h and bar.birth <= epsilon < bar.death)


def _write_rows(path, rows, homology_dimensions, max_scale):
    with atomic_write(path, newline='') as handle:
        handle.write(f"# dims={' '.join(str(h) for h in homology_dimensions)}\n")
        if max_scale is not None:
            handle.write(f'# max_scale={format_float(max_scale)}\n')
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(DIAGRAM_HEADER)
        for pair in rows:
            writer.writerow([pair.dimension, format_float(pair.birth), format_float(pair.death)])


def write_diagram(path, diagram: PersistenceDiagram):
    """
    CSV with header ``dim,birth,death`` and ``inf`` for infinite deaths

    ``# dims=`` and ``# max_scale=`` comment lines precede the header, so
    readers that skip ``#`` comments see plain three-column CSV.
    """
    _write_rows(path, diagram.pairs, diagram.homology_dimensions, diagram.max_scale)


def write_barcode(path, barcode: Barcode, max_scale=None):
    _write_rows(path, barcode.intervals, barcode.homology_dimensions, max_scale)


def _read_metadata(key, raw, path, line_no):
    if key == 'dims':
        try:
            dims = [int(tok) for tok in raw.split()]
        except ValueError:
            raise DataError(f'malformed dims {raw!r}', path, line_no) from None
        if not dims or any(h < 0 for h in dims):
            raise DataError(f'dims must list non-negative integers, got {raw!r}', path, line_no)
        return dims
    try:
        max_scale = float(raw)
    except ValueError:
        raise DataError(f'malformed max_scale {raw!r}', path, line_no) from None
    if not (max_scale > 0 and math.isfinite(max_scale)):
        raise DataError(f'max_scale must be a positive real, got {raw!r}', path, line_no)
    return max_scale


def _read_rows(path):
    rows, meta = [], {}
    try:
        with open(path, 'r', encoding='utf-8', newline='') as handle:
            lines = list(enumerate(handle, start=1))
    except OSError as exc:
        raise DataError(f'cannot read diagram: {exc.strerror or exc}', path) from exc
    except UnicodeDecodeError as exc:
        raise DataError(f'not valid UTF-8: {exc}', path) from exc

    header_seen = False
    for line_no, line in lines:
        text = line.strip()
        if not text:
            continue
        if text.startswith('#'):
            key, _, raw = text[1:].strip().partition('=')
            if key in ('dims', 'max_scale'):
                meta[key] = _read_metadata(key, raw, path, line_no)
            continue
        fields = [field.strip() for field in next(csv.reader([text]))]
        if not header_seen:
            if fields != DIAGRAM_HEADER:
                raise SchemaError(f'expected header {",".join(DIAGRAM_HEADER)}, found {text!r}', path, line_no)
            header_seen = True
            continue
        if len(fields) != 3:
            raise DataError(f'expected 3 fields, found {len(fields)}', path, line_no)
        try:
            dim = int(fields[0])
            birth = float(fields[1])
            death = INFINITE if fields[2].lower() == 'inf' else float(fields[2])
        except ValueError:
            raise DataError(f'malformed pair {text!r}', path, line_no) from None
        if dim < 0 or not math.isfinite(birth) or birth < 0 or math.isnan(death) or death < birth:
            raise DataError(f'invalid pair {text!r}', path, line_no)
        rows.append((dim, birth, death))
    if not header_seen:
        raise SchemaError('missing dim,birth,death header', path)
    return rows, meta.get('dims'), meta.get('max_scale')


def read_diagram(path) -> PersistenceDiagram:
    rows, dims, max_scale = _read_rows(path)
    if dims is not None:
        dims = sorted(set(dims) | {r[0] for r in rows})
    try:
        return PersistenceDiagram(rows, dims, max_scale)
    except ValidationError as exc:
        raise DataError(str(exc), path) from exc


def read_barcode(path) -> Barcode:
    rows, dims, _ = _read_rows(path)
    if dims is None:
        dims = sorted({r[0] for r in rows}) or [0]
    try:
        return Barcode(tuple(rows), tuple(dims))
    except ValidationError as exc:
        raise DataError(str(exc), path) from exc
