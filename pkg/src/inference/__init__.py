"""
Hypothesis tests and confidence bands over samples of topological summaries
"""

from .bands import cloud_diagram, confidence_band
from .permutation import (
    count_splits,
    diagram_permutation_test,
    joint_loss,
    landscape_functional_test,
    resolve_permutations,
)
from .report import NOISE, SIGNAL, ConfidenceBand, TestMethod, TestReport
from .ttest import landscape_t_test, two_sample_t_test

__all__ = [
    'TestMethod', 'TestReport', 'ConfidenceBand', 'SIGNAL', 'NOISE',
    'diagram_permutation_test', 'landscape_functional_test', 'joint_loss',
    'count_splits', 'resolve_permutations',
    'two_sample_t_test', 'landscape_t_test', 'confidence_band', 'cloud_diagram',
]
