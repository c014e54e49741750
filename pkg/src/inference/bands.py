"""
Bootstrap confidence band for separating topological signal from noise
"""

from __future__ import annotations

import numpy as np

from src.filtration.rips import build_rips, resolve_max_scale
from src.geometry.metric_space import Metric, PointCloud, distance_matrix
from src.persistence.diagram import PersistenceDiagram
from src.persistence.engine import compute_persistence
from src.statistics.distances import bottleneck
from src.utils.errors import ValidationError
from src.utils.logger import get_logger
from src.utils.rng import STREAM_BOOTSTRAP, generator
from src.utils.workers import ordered_map
from .report import ConfidenceBand

logger = get_logger('inference.bands')

DEFAULT_BOOTSTRAP_ROUNDS = 200


def cloud_diagram(cloud: PointCloud, metric: Metric, max_dimension: int, max_scale: float) -> PersistenceDiagram:
    dm = distance_matrix(cloud, metric)
    return compute_persistence(build_rips(dm, max_dimension, max_scale))


def confidence_band(cloud: PointCloud, h: int, alpha: float = 0.05,
                    bootstrap_rounds: int = DEFAULT_BOOTSTRAP_ROUNDS, seed: int = 0,
                    metric: Metric = None, max_dimension: int = 2, max_scale=None,
                    workers: int = 1) -> ConfidenceBand:
    """
    Bootstrap c_n for the dimension-h diagram of a cloud

    Each round resamples n points with replacement (round i uses stream
    (seed, i)), rebuilds the filtration at the full cloud's max_scale and
    takes the bottleneck distance to the full diagram. c_n is the empirical
    (1 - alpha) quantile of those distances.
    """
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f'alpha must lie in (0, 1), got {alpha}')
    if int(bootstrap_rounds) != bootstrap_rounds or bootstrap_rounds < 1:
        raise ValidationError(f'bootstrap_rounds must be a positive integer, got {bootstrap_rounds}')
    metric = metric or Metric()
    max_scale = resolve_max_scale(distance_matrix(cloud, metric), max_scale)
    full = cloud_diagram(cloud, metric, max_dimension, max_scale)
    full.require(h)

    def round_distance(index):
        rng = generator(seed, STREAM_BOOTSTRAP, index)
        resample = cloud.subsample(rng.integers(0, cloud.size, size=cloud.size))
        return bottleneck(full, cloud_diagram(resample, metric, max_dimension, max_scale), h, cap=max_scale)

    distances = np.array(ordered_map(round_distance, range(int(bootstrap_rounds)), workers))
    c_n = float(np.quantile(distances, 1.0 - alpha, method='inverted_cdf'))
    band = ConfidenceBand(c_n, alpha, int(bootstrap_rounds), seed, h, tuple(distances.tolist()))
    logger.info('Confidence band H%d: c_n=%.6g over %d rounds (alpha=%g)', h, c_n, bootstrap_rounds, alpha)
    return band
