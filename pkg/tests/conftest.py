"""
Shared fixtures for the tda-stats test suite
"""

import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.geometry import PointCloud, regular_circle  # noqa: E402
from src.persistence import PersistenceDiagram  # noqa: E402


@pytest.fixture(autouse=True)
def isolated_environment(tmp_path, monkeypatch):
    """Keep TDA_* settings and log files of the host out of the tests"""
    for key in list(os.environ):
        if key.startswith('TDA_') or key in ('LOG_LEVEL', 'LOG_FILE'):
            monkeypatch.delenv(key, raising=False)
    monkeypatch.setenv('LOG_FILE', str(tmp_path / 'logs' / 'tda.log'))
    monkeypatch.setenv('LOG_LEVEL', 'WARNING')


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


@pytest.fixture
def circle20():
    """Twenty evenly spaced points on the unit circle"""
    return regular_circle(20)


@pytest.fixture
def triangle_cloud():
    """Unit equilateral triangle"""
    return PointCloud([[0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3.0) / 2.0]])


@pytest.fixture
def simple_diagram():
    return PersistenceDiagram(
        [(0, 0.0, 0.5), (0, 0.0, np.inf), (1, 0.2, 0.9), (1, 0.4, 0.4)],
        homology_dimensions=(0, 1),
        max_scale=2.0,
    )


@pytest.fixture
def write_csv(tmp_path):
    """Factory writing rows as a comma separated file under tmp_path"""
    def write(name, rows):
        path = tmp_path / name
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as handle:
            for row in rows:
                handle.write(','.join(str(v) for v in row) + '\n')
        return str(path)
    return write
