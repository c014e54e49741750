"""
Two-sample permutation tests on diagrams and landscapes

Group labels are reassigned over the pooled sample. In exhaustive mode every
distinct split is enumerated once; with equal group sizes a split and its
label swap give the same statistic, so only splits keeping item 0 in the
first group are visited. Sampled mode draws each relabeling from its own
counter-based stream and applies the +1 correction.
"""

from __future__ import annotations

import itertools
import math
from typing import Callable, Sequence, Tuple

import numpy as np

from src.landscape.landscape import PersistenceLandscape, landscape_integral
from src.persistence.diagram import PersistenceDiagram
from src.statistics.distances import pairwise_wasserstein
from src.utils.config import AUTO, EXHAUSTIVE
from src.utils.errors import ValidationError
from src.utils.logger import get_logger
from src.utils.rng import STREAM_PERMUTATION, generator
from src.utils.workers import ordered_map
from .report import TestMethod, TestReport

logger = get_logger('inference')

EXHAUSTIVE_LIMIT = 20000
DEFAULT_PERMUTATIONS = 10000
MAX_EXHAUSTIVE_SPLITS = 2_000_000


def count_splits(n1: int, n2: int) -> int:
    """Number of distinct ways to split n1 + n2 items into groups of n1 and n2"""
    total = math.comb(n1 + n2, n1)
    return total // 2 if n1 == n2 else total


def resolve_permutations(permutations, n1: int, n2: int):
    """
    Map AUTO / EXHAUSTIVE / a count onto the mode actually run

    AUTO enumerates when there are at most EXHAUSTIVE_LIMIT distinct splits
    and otherwise samples DEFAULT_PERMUTATIONS relabelings.
    """
    if permutations is None or permutations == AUTO:
        return EXHAUSTIVE if count_splits(n1, n2) <= EXHAUSTIVE_LIMIT else DEFAULT_PERMUTATIONS
    if permutations == EXHAUSTIVE:
        splits = count_splits(n1, n2)
        if splits > MAX_EXHAUSTIVE_SPLITS:
            raise ValidationError(f'{splits} splits are too many to enumerate; give a permutation count')
        return EXHAUSTIVE
    if isinstance(permutations, bool) or int(permutations) != permutations or permutations < 1:
        raise ValidationError(f'permutations must be a positive integer, auto or exhaustive: {permutations}')
    return int(permutations)


def exhaustive_masks(n1: int, n2: int) -> np.ndarray:
    """Membership masks of the first group, observed split first"""
    n = n1 + n2
    combos = itertools.combinations(range(n), n1)
    if n1 == n2:
        combos = (c for c in combos if c[0] == 0)
    masks = []
    for combo in combos:
        mask = np.zeros(n, dtype=bool)
        mask[list(combo)] = True
        masks.append(mask)
    return np.array(masks).reshape(-1, n)


def sampled_masks(n1: int, n2: int, count: int, seed: int, workers: int = 1) -> np.ndarray:
    """``count`` random relabelings; relabeling i only depends on (seed, i)"""
    n = n1 + n2

    def draw(index):
        mask = np.zeros(n, dtype=bool)
        mask[generator(seed, STREAM_PERMUTATION, index).permutation(n)[:n1]] = True
        return mask

    return np.array(ordered_map(draw, range(count), workers)).reshape(-1, n)


def _observed_mask(n1: int, n2: int) -> np.ndarray:
    mask = np.zeros(n1 + n2, dtype=bool)
    mask[:n1] = True
    return mask


def permutation_p_value(statistic: Callable[[np.ndarray], np.ndarray], n1: int, n2: int,
                        permutations, seed: int, larger_is_extreme: bool = True,
                        workers: int = 1) -> Tuple[float, float, object, int]:
    """
    Permutation p-value of a vectorised statistic

    Args:
        statistic: Maps a (k, n1 + n2) boolean membership array of the
            first group to k statistic values
        n1, n2: Group sizes
        permutations: AUTO, EXHAUSTIVE or a number of sampled relabelings
        seed: Seed of the relabeling streams
        larger_is_extreme: True when large values count against the null,
            False when small values do

    Returns:
        (p_value, observed, permutations_used, splits)
    """
    mode = resolve_permutations(permutations, n1, n2)
    observed = float(statistic(_observed_mask(n1, n2)[None, :])[0])
    tolerance = 1e-12 * max(1.0, abs(observed))

    if mode == EXHAUSTIVE:
        masks = exhaustive_masks(n1, n2)
    else:
        masks = sampled_masks(n1, n2, mode, seed, workers)
    values = np.asarray(statistic(masks), dtype=np.float64)
    if larger_is_extreme:
        extreme = int(np.count_nonzero(values >= observed - tolerance))
    else:
        extreme = int(np.count_nonzero(values <= observed + tolerance))

    if mode == EXHAUSTIVE:
        p_value = extreme / masks.shape[0]
    else:
        p_value = (1 + extreme) / (1 + masks.shape[0])
    logger.debug('Permutation test: %d relabelings, %d as extreme, p=%.6g', masks.shape[0], extreme, p_value)
    return min(p_value, 1.0), observed, mode, count_splits(n1, n2)


def joint_loss(masks: np.ndarray, powered: np.ndarray) -> np.ndarray:
    """
    Within-group loss of every split

    For each group g of size m: 1 / (2 m (m - 1)) times the sum over pairs
    i < j in g of W_p(d_i, d_j)^p; the two group terms are added.
    """
    masks = np.atleast_2d(masks).astype(np.float64)
    total = np.zeros(masks.shape[0])
    for members in (masks, 1.0 - masks):
        m = members.sum(axis=1)
        within = np.einsum('ki,ij,kj->k', members, powered, members) / 2.0
        total += within / (2.0 * m * (m - 1.0))
    return total


def diagram_permutation_test(group1: Sequence[PersistenceDiagram], group2: Sequence[PersistenceDiagram],
                             h: int, p: float = 2.0, permutations=AUTO, seed: int = 0,
                             cap=None, workers: int = 1) -> TestReport:
    """
    Permutation test for a difference between two diagram distributions

    The statistic is the joint within-group loss; small losses are extreme,
    since a real difference keeps each group tight relative to a mixed one.
    Every pairwise W_p^p is computed once and reused for all relabelings.
    """
    group1, group2 = list(group1), list(group2)
    if len(group1) < 2 or len(group2) < 2:
        raise ValidationError(
            f'Each group needs at least 2 diagrams, got {len(group1)} and {len(group2)}')
    powered = pairwise_wasserstein(group1 + group2, h, p, cap, workers, powered=True)
    p_value, observed, used, splits = permutation_p_value(
        lambda masks: joint_loss(masks, powered), len(group1), len(group2),
        permutations, seed, larger_is_extreme=False, workers=workers)
    report = TestReport(TestMethod.DIAGRAM_PERMUTATION, p_value, observed, used, seed,
                        (len(group1), len(group2)), homology_dimension=h, splits=splits)
    logger.info(report.summary())
    return report


def mean_difference(masks: np.ndarray, scalars: np.ndarray) -> np.ndarray:
    """|mean of the first group - mean of the second| for every split"""
    masks = np.atleast_2d(masks).astype(np.float64)
    first = masks @ scalars / masks.sum(axis=1)
    second = (1.0 - masks) @ scalars / (1.0 - masks).sum(axis=1)
    return np.abs(first - second)


def landscape_scalars(group1: Sequence[PersistenceLandscape],
                      group2: Sequence[PersistenceLandscape]) -> Tuple[np.ndarray, np.ndarray]:
    """Total landscape integral of every member, after checking the groups are comparable"""
    group1, group2 = list(group1), list(group2)
    if not group1 or not group2:
        raise ValidationError('Both groups need at least one landscape')
    pooled = group1 + group2
    dims = {L.homology_dimension for L in pooled}
    if len(dims) > 1:
        raise ValidationError(f'Landscapes mix homology dimensions {sorted(dims)}')
    caps = {L.domain_cap for L in pooled}
    if len(caps) > 1:
        raise ValidationError(f'Landscapes have different domain caps {sorted(caps, key=str)}')
    return (np.array([landscape_integral(L) for L in group1]),
            np.array([landscape_integral(L) for L in group2]))


def landscape_functional_test(group1: Sequence[PersistenceLandscape], group2: Sequence[PersistenceLandscape],
                              permutations=AUTO, seed: int = 0, workers: int = 1) -> TestReport:
    """Permutation test on the difference of mean total landscape integrals"""
    group1, group2 = list(group1), list(group2)
    x1, x2 = landscape_scalars(group1, group2)
    pooled = np.concatenate((x1, x2))
    p_value, observed, used, splits = permutation_p_value(
        lambda masks: mean_difference(masks, pooled), len(x1), len(x2),
        permutations, seed, larger_is_extreme=True, workers=workers)
    h = group1[0].homology_dimension
    report = TestReport(TestMethod.LANDSCAPE_PERMUTATION, p_value, observed, used, seed,
                        (len(x1), len(x2)), homology_dimension=h, splits=splits)
    logger.info(report.summary())
    return report
