"""
Frechet mean and variance of a sample of persistence diagrams

Local search over candidate diagrams: match the candidate optimally (W2) to
every sample diagram, move each candidate point to the mean of its matched
targets (a diagonal match contributes the point's own diagonal projection),
and drop points matched to the diagonal by every diagram. The search starts
at the sample diagram with the smallest functional value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from src.persistence.diagram import PersistenceDiagram
from src.utils.errors import ValidationError
from src.utils.logger import get_logger
from src.utils.workers import ordered_map
from .distances import DIAGONAL, common_cap, diagonal_projection, match_points

logger = get_logger('statistics.frechet')

DEFAULT_MAX_ITERATIONS = 100


@dataclass(frozen=True)
class FrechetResult:
    """Local minimiser of the Frechet functional and its value"""

    mean: PersistenceDiagram
    variance: float
    iterations: int
    converged: bool
    history: Tuple[float, ...] = ()

    def to_dict(self) -> dict:
        h = self.mean.homology_dimensions[0]
        return {
            'dim': h,
            'variance': self.variance,
            'iterations': self.iterations,
            'converged': self.converged,
            'history': list(self.history),
            'mean': [[float(b), float(d)] for b, d in self.mean.points(h)],
        }


def _functional(candidate: np.ndarray, samples: List[np.ndarray], workers) -> float:
    costs = ordered_map(lambda target: match_points(candidate, target, 2.0).cost, samples, workers)
    return float(np.mean(costs))


def frechet_functional(candidate: PersistenceDiagram, sample: Sequence[PersistenceDiagram],
                       h: int, cap=None, workers: int = 1) -> float:
    """(1/N) sum_i W2(candidate, d_i)^2"""
    if not sample:
        raise ValidationError('Frechet functional needs a non-empty sample')
    cap = common_cap(list(sample) + [candidate], h, cap)
    points = [d.off_diagonal(h, cap) for d in sample]
    return _functional(candidate.off_diagonal(h, cap), points, workers)


def _targets(candidate: np.ndarray, sample_points: np.ndarray) -> Tuple[np.ndarray, Tuple[int, ...]]:
    """Matched target of each candidate point and the matched indices (-1 = diagonal)"""
    matching = match_points(candidate, sample_points, 2.0)
    targets = diagonal_projection(candidate)
    indices = [-1] * candidate.shape[0]
    for i, j, _ in matching.pairs:
        if i == DIAGONAL or j == DIAGONAL:
            continue
        targets[i] = sample_points[j]
        indices[i] = j
    return targets, tuple(indices)


def frechet_mean(sample: Sequence[PersistenceDiagram], h: int, cap=None,
                 max_iterations: int = DEFAULT_MAX_ITERATIONS, workers: int = 1) -> FrechetResult:
    """
    Frechet mean of a diagram sample in dimension ``h``

    Args:
        sample: Non-empty list of diagrams
        h: Homology dimension
        cap: Truncation of infinite deaths (default: the sample's common max_scale)
        max_iterations: Upper bound on matching/update rounds
        workers: Threads for the per-diagram matchings of a round

    Returns:
        FrechetResult; ``history`` holds the non-increasing functional values
    """
    sample = list(sample)
    if not sample:
        raise ValidationError('Frechet mean needs a non-empty sample')
    if max_iterations < 1:
        raise ValidationError(f'max_iterations must be >= 1, got {max_iterations}')
    cap = common_cap(sample, h, cap)
    points = [d.off_diagonal(h, cap) for d in sample]
    max_scale = cap if cap is not None else sample[0].max_scale

    values = [_functional(p, points, workers) for p in points]
    start = int(np.argmin(values))
    candidate = points[start]
    current = values[start]
    history = [current]
    logger.debug('Frechet mean: %d diagrams, start at sample %d (F=%.6g)', len(sample), start, current)

    previous_matching = None
    converged = False
    iterations = 0
    for iterations in range(1, max_iterations + 1):
        if candidate.shape[0] == 0:
            converged = True
            break
        rounds = ordered_map(lambda target: _targets(candidate, target), points, workers)
        matching = tuple(indices for _, indices in rounds)
        if matching == previous_matching:
            converged = True
            break
        previous_matching = matching

        stacked = np.stack([targets for targets, _ in rounds])
        # Offsets from the current point keep an unchanged point bit-identical.
        updated = candidate + (stacked - candidate[None, :, :]).mean(axis=0)
        on_diagonal_everywhere = np.all(np.array(matching) < 0, axis=0)
        updated = updated[~on_diagonal_everywhere]
        updated = updated[updated[:, 1] > updated[:, 0]]

        if updated.shape == candidate.shape and np.array_equal(updated, candidate):
            converged = True
            break
        value = _functional(updated, points, workers)
        if value > current:
            logger.debug('Frechet update raised the functional (%.6g > %.6g); stopping', value, current)
            break
        candidate, current = updated, value
        history.append(current)
        logger.debug('Frechet iteration %d: %d points, F=%.6g', iterations, candidate.shape[0], current)

    mean = PersistenceDiagram.from_points(candidate, h, max_scale=max_scale)
    return FrechetResult(mean, current, iterations, converged, tuple(history))
