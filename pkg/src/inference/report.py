"""
Result records of the statistical tests and confidence bands
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple, Union

from src.persistence.diagram import PersistenceDiagram, PersistencePair
from src.utils.config import EXHAUSTIVE
from src.utils.errors import ValidationError
from src.utils.fileio import write_json

SIGNAL = 'signal'
NOISE = 'noise'


class TestMethod(str, Enum):
    __test__ = False

    DIAGRAM_PERMUTATION = 'DiagramPermutation'
    LANDSCAPE_PERMUTATION = 'LandscapePermutation'
    TWO_SAMPLE_T = 'TwoSampleT'


@dataclass(frozen=True)
class TestReport:
    """
    Outcome of one two-sample test

    ``permutations_used`` is the number of relabelings evaluated, or
    EXHAUSTIVE when every distinct split was enumerated (``splits`` then
    holds their count). ``tests_run`` is carried for callers that correct
    for multiple testing; no correction is applied here.
    """

    __test__ = False

    method: TestMethod
    p_value: float
    observed_statistic: float
    permutations_used: Union[int, str]
    seed: int
    group_sizes: Tuple[int, int]
    homology_dimension: Optional[int] = None
    splits: Optional[int] = None
    degrees_of_freedom: Optional[float] = None
    tests_run: int = 1

    def __post_init__(self):
        if not (0.0 < self.p_value <= 1.0):
            raise ValidationError(f'p-value must lie in (0, 1], got {self.p_value}')
        if self.permutations_used != EXHAUSTIVE and int(self.permutations_used) < 0:
            raise ValidationError(f'Invalid permutation count {self.permutations_used}')

    @property
    def exhaustive(self) -> bool:
        return self.permutations_used == EXHAUSTIVE

    def summary(self) -> str:
        where = f' H{self.homology_dimension}' if self.homology_dimension is not None else ''
        runs = 'exhaustive' if self.exhaustive else f'{self.permutations_used} permutations'
        if self.method == TestMethod.TWO_SAMPLE_T:
            runs = f'df={self.degrees_of_freedom:.4g}'
        return (f'{self.method.value}{where}: p={self.p_value:.6g} '
                f'statistic={self.observed_statistic:.6g} ({runs})')

    def to_dict(self) -> dict:
        return {
            'method': self.method.value,
            'p_value': self.p_value,
            'observed_statistic': _json_float(self.observed_statistic),
            'permutations_used': self.permutations_used,
            'splits': self.splits,
            'seed': self.seed,
            'group_sizes': list(self.group_sizes),
            'homology_dimension': self.homology_dimension,
            'degrees_of_freedom': self.degrees_of_freedom,
            'tests_run': self.tests_run,
        }

    def write(self, path):
        write_json(path, self.to_dict())


@dataclass(frozen=True)
class ConfidenceBand:
    """
    Bootstrap band of half-width c_n around the diagonal

    A point whose lifespan (death - birth) is below sqrt(2) * c_n is
    indistinguishable from the diagonal and counts as noise.
    """

    c_n: float
    alpha: float
    bootstrap_rounds: int
    seed: int
    homology_dimension: int = 0
    distances: Tuple[float, ...] = field(default=(), repr=False)

    def __post_init__(self):
        if not (self.c_n >= 0 and math.isfinite(self.c_n)):
            raise ValidationError(f'c_n must be a non-negative real, got {self.c_n}')
        if not 0.0 < self.alpha < 1.0:
            raise ValidationError(f'alpha must lie in (0, 1), got {self.alpha}')

    @property
    def threshold(self) -> float:
        return math.sqrt(2.0) * self.c_n

    def is_noise(self, pair: PersistencePair) -> bool:
        return pair.persistence < self.threshold

    def classify(self, diagram: PersistenceDiagram, h=None):
        """(pair, 'signal' | 'noise') for every pair of dimension ``h`` (default: the band's)"""
        h = self.homology_dimension if h is None else h
        return [(pair, NOISE if self.is_noise(pair) else SIGNAL) for pair in diagram.in_dimension(h)]

    def significant_features(self, diagram: PersistenceDiagram, h=None) -> PersistenceDiagram:
        """Diagram restricted to the signal pairs of dimension ``h``"""
        h = self.homology_dimension if h is None else h
        kept = [pair for pair, label in self.classify(diagram, h) if label == SIGNAL]
        return PersistenceDiagram(kept, (h,), diagram.max_scale)

    def to_dict(self) -> dict:
        return {
            'c_n': self.c_n,
            'threshold': self.threshold,
            'alpha': self.alpha,
            'bootstrap_rounds': self.bootstrap_rounds,
            'seed': self.seed,
            'dim': self.homology_dimension,
            'distances': list(self.distances),
        }

    def write(self, path):
        write_json(path, self.to_dict())


def _json_float(value):
    if math.isinf(value):
        return 'inf' if value > 0 else '-inf'
    return value
