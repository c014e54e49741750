"""
Welch two-sample t-test on scalar summaries
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy import stats

from src.landscape.landscape import PersistenceLandscape
from src.utils.errors import ValidationError
from src.utils.logger import get_logger
from .permutation import landscape_scalars
from .report import TestMethod, TestReport

logger = get_logger('inference')

# Smallest positive p-value reported when zero variance meets unequal means.
P_FLOOR = float(np.finfo(np.float64).tiny)


def welch_degrees_of_freedom(x1: np.ndarray, x2: np.ndarray) -> float:
    """Welch-Satterthwaite approximation"""
    a = np.var(x1, ddof=1) / x1.shape[0]
    b = np.var(x2, ddof=1) / x2.shape[0]
    if a + b == 0:
        return float(x1.shape[0] + x2.shape[0] - 2)
    return float((a + b) ** 2 / (a ** 2 / (x1.shape[0] - 1) + b ** 2 / (x2.shape[0] - 1)))


def two_sample_t_test(scalars1: Sequence[float], scalars2: Sequence[float], seed: int = 0,
                      homology_dimension=None) -> TestReport:
    """
    Two-sided Welch t-test

    When both groups have zero variance the statistic is 0 with p = 1 for
    equal means, and +-inf with p = P_FLOOR otherwise.
    """
    x1 = np.asarray(scalars1, dtype=np.float64).ravel()
    x2 = np.asarray(scalars2, dtype=np.float64).ravel()
    if x1.shape[0] < 2 or x2.shape[0] < 2:
        raise ValidationError(f'Each group needs at least 2 values, got {x1.shape[0]} and {x2.shape[0]}')
    if not (np.all(np.isfinite(x1)) and np.all(np.isfinite(x2))):
        raise ValidationError('t-test values must be finite')

    df = welch_degrees_of_freedom(x1, x2)
    if np.var(x1) == 0 and np.var(x2) == 0:
        difference = float(x1[0] - x2[0])
        if difference == 0:
            statistic, p_value = 0.0, 1.0
        else:
            statistic, p_value = math.copysign(math.inf, difference), P_FLOOR
    else:
        result = stats.ttest_ind(x1, x2, equal_var=False)
        statistic = float(result.statistic)
        p_value = min(max(float(result.pvalue), P_FLOOR), 1.0)

    report = TestReport(TestMethod.TWO_SAMPLE_T, p_value, statistic, 0, seed,
                        (x1.shape[0], x2.shape[0]), homology_dimension=homology_dimension,
                        degrees_of_freedom=df)
    logger.debug(report.summary())
    return report


def landscape_t_test(group1: Sequence[PersistenceLandscape], group2: Sequence[PersistenceLandscape],
                     seed: int = 0) -> TestReport:
    """Welch t-test on the total landscape integrals of two groups"""
    group1, group2 = list(group1), list(group2)
    x1, x2 = landscape_scalars(group1, group2)
    report = two_sample_t_test(x1, x2, seed, homology_dimension=group1[0].homology_dimension)
    logger.info(report.summary())
    return report
