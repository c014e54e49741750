"""
Persistent homology over the two-element field

Standard column reduction of the filtration boundary matrix: columns are
processed in filtration order and a column is added (XOR) to the earlier
column owning its lowest row until its pivot is unique or it vanishes.
H0 can alternatively be read off a union-find sweep over the edges.
"""

from __future__ import annotations

import math
from typing import Dict, List, Tuple

from src.filtration.rips import Filtration
from src.utils.errors import ValidationError
from src.utils.logger import get_logger
from .diagram import INFINITE, Barcode, PersistenceDiagram, PersistencePair

logger = get_logger('persistence')


def computed_dimensions(f: Filtration) -> Tuple[int, ...]:
    """Homology dimensions a filtration determines: 0 .. max_dimension - 1 (always H0)"""
    return tuple(range(max(f.max_dimension - 1, 0) + 1))


class UnionFind:
    """Disjoint sets keyed by vertex index, remembering each root's birth value"""

    def __init__(self, size):
        self.parent = list(range(size))
        self.birth = [0.0] * size

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        """Merge the sets of a and b; return the absorbed (younger) root or None"""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return None
        # Elder rule: the component born later dies; ties go to the larger index.
        if (self.birth[ra], ra) > (self.birth[rb], rb):
            ra, rb = rb, ra
        self.parent[rb] = ra
        return rb


def h0_pairs_union_find(f: Filtration) -> Tuple[List[PersistencePair], List[int]]:
    """
    H0 pairs by a union-find sweep over edges in filtration order

    Returns:
        (pairs, negative_edges): H0 pairs including infinite ones, and the
        filtration indices of the edges that merged two components
    """
    index_of_vertex = {}
    for i, simplex in enumerate(f.simplices):
        if len(simplex) == 1:
            index_of_vertex[simplex[0]] = i
    size = max(index_of_vertex, default=-1) + 1
    uf = UnionFind(size)
    values = f.values.tolist()
    for vertex, i in index_of_vertex.items():
        uf.birth[vertex] = values[i]

    pairs = []
    negative_edges = []
    for i, simplex in enumerate(f.simplices):
        if len(simplex) != 2:
            continue
        dead = uf.union(simplex[0], simplex[1])
        if dead is not None:
            pairs.append(PersistencePair(0, uf.birth[dead], values[i]))
            negative_edges.append(i)
    roots = {uf.find(v) for v in index_of_vertex}
    pairs.extend(PersistencePair(0, uf.birth[r], INFINITE) for r in roots)
    return pairs, negative_edges


def reduce_boundary(f: Filtration, min_column_size=2):
    """
    Reduce the boundary matrix of ``f``

    Args:
        f: Filtration in a valid face-before-coface order
        min_column_size: Smallest simplex size whose column is reduced

    Returns:
        (pivots, positive): mapping of paired row index -> killing column index,
        and the set of column indices that reduced to zero
    """
    position: Dict[Tuple[int, ...], int] = {}
    for i, simplex in enumerate(f.simplices):
        position[tuple(simplex)] = i

    owner: Dict[int, int] = {}
    reduced: Dict[int, set] = {}
    pivots: Dict[int, int] = {}
    positive = set()
    additions = 0

    for j, simplex in enumerate(f.simplices):
        size = len(simplex)
        if size < min_column_size:
            continue
        column = {position[simplex[:k] + simplex[k + 1:]] for k in range(size)}
        while column:
            low = max(column)
            other = owner.get(low)
            if other is None:
                break
            column ^= reduced[other]
            additions += 1
        if column:
            low = max(column)
            owner[low] = j
            reduced[j] = column
            pivots[low] = j
        else:
            positive.add(j)
    logger.debug('Boundary reduction: %d columns paired, %d column additions', len(pivots), additions)
    return pivots, positive


def compute_persistence(f: Filtration, h0_fast_path: bool = True) -> PersistenceDiagram:
    """
    Persistence diagram of a filtration in dimensions 0 .. max_dimension - 1

    Args:
        f: Rips filtration
        h0_fast_path: Read H0 off a union-find sweep and skip the edge columns
            of the reduction; both paths give the same diagram

    Returns:
        PersistenceDiagram keeping zero-persistence pairs and using INFINITE
        for classes alive at max_scale
    """
    dims = computed_dimensions(f)
    top = dims[-1]
    values = f.values.tolist()
    simplices = f.simplices

    pairs: List[PersistencePair] = []
    if h0_fast_path:
        h0, negative_edges = h0_pairs_union_find(f)
        pairs.extend(h0)
        # Edge columns only matter for H0; triangle columns pivot on edge rows.
        pivots, positive = reduce_boundary(f, min_column_size=3) if top >= 1 else ({}, set())
        paired_rows = set(pivots)
        killers = set(pivots.values()) | set(negative_edges)
        positive_edges = {i for i, s in enumerate(simplices) if len(s) == 2} - set(negative_edges)
        positive |= positive_edges
        first_dim = 1
    else:
        pivots, positive = reduce_boundary(f, min_column_size=2)
        positive |= {i for i, s in enumerate(simplices) if len(s) == 1}
        paired_rows = set(pivots)
        killers = set(pivots.values())
        first_dim = 0

    for row, col in pivots.items():
        dim = len(simplices[row]) - 1
        if first_dim <= dim <= top:
            pairs.append(PersistencePair(dim, values[row], values[col]))

    for i in sorted(positive):
        dim = len(simplices[i]) - 1
        if first_dim <= dim <= top and i not in paired_rows and i not in killers:
            pairs.append(PersistencePair(dim, values[i], INFINITE))

    diagram = PersistenceDiagram(pairs, dims, f.max_scale)
    logger.debug('Persistence pairs per dimension: %s', {h: diagram.count(h) for h in dims})
    return diagram


def betti_at(d: PersistenceDiagram, h: int, epsilon: float) -> int:
    """Number of dimension-h pairs with birth <= epsilon < death"""
    d.require(h)
    epsilon = float(epsilon)
    if epsilon < 0 or math.isnan(epsilon):
        raise ValidationError(f'epsilon must be non-negative, got {epsilon}')
    if d.max_scale is not None and epsilon > d.max_scale:
        raise ValidationError(f'epsilon {epsilon} exceeds the diagram max_scale {d.max_scale}')
    return sum(1 for p in d.in_dimension(h) if p.birth <= epsilon < p.death)


def diagram_to_barcode(d: PersistenceDiagram) -> Barcode:
    """One interval per pair with death > birth"""
    return Barcode(tuple(p for p in d.pairs if p.death > p.birth), d.homology_dimensions)
