"""
Tests for persistence landscapes
"""

import json
import math

import numpy as np
import pytest

from oracles import landscape_by_sorting, tent
from src.filtration import build_rips
from src.geometry import PointCloud, distance_matrix
from src.landscape import (
    PersistenceLandscape,
    grid_values,
    landscape_distance,
    landscape_from_diagram,
    landscape_integral,
    landscape_norm,
    level_integrals,
    mean_landscape,
    read_landscape_json,
    write_grid_csv,
    write_landscape_json,
)
from src.persistence import PersistenceDiagram, betti_at, compute_persistence
from src.utils import DataError, SchemaError, ValidationError


def _landscape(points, cap=None):
    return landscape_from_diagram(PersistenceDiagram.from_points(points, 1, max_scale=cap), 1)


def _random_points(rng, count, scale=2.0):
    births = rng.uniform(0.0, scale, size=count)
    return np.column_stack([births, births + rng.uniform(0.05, scale, size=count)])


def _slopes(level):
    return np.diff(level[:, 1]) / np.diff(level[:, 0])


class TestConstruction:
    """Exact landscapes of small diagrams"""

    def test_single_tent(self):
        L = _landscape([[0.0, 2.0]])
        assert len(L) == 1
        np.testing.assert_array_equal(L.level(0), [[0.0, 0.0], [1.0, 1.0], [2.0, 0.0]])
        np.testing.assert_array_equal(L.evaluate([0.5, 1.0, 3.0], k=1), [[0.0, 0.0, 0.0]])
        assert landscape_integral(L) == 1.0

    def test_empty_diagram(self):
        L = _landscape(np.empty((0, 2)))
        assert len(L) == 0
        assert landscape_integral(L) == 0.0
        assert L.evaluate([0.3]).shape == (0, 1)

    def test_multiplicity_doubles_levels(self):
        L = _landscape([[0.0, 2.0], [0.0, 2.0]])
        assert len(L) == 2
        np.testing.assert_array_equal(L.level(0), L.level(1))
        assert landscape_integral(L) == 2.0

    def test_overlapping_tents(self):
        L = _landscape([[0.0, 4.0], [1.0, 3.0]])
        np.testing.assert_allclose(L.evaluate([2.0]), [[2.0], [1.0]])
        np.testing.assert_allclose(level_integrals(L), [4.0, 1.0])

    def test_partially_overlapping_tents(self):
        L = _landscape([[0.0, 2.0], [1.0, 3.0]])
        np.testing.assert_allclose(L.evaluate([1.5]), [[0.5], [0.5]])
        np.testing.assert_allclose(L.evaluate([1.0, 2.0], k=1), [[0.0, 0.0]])
        assert landscape_integral(L) == pytest.approx(2.0)

    def test_infinite_death_truncated_at_cap(self):
        d = PersistenceDiagram([(0, 0.0, 0.5), (0, 0.0, math.inf)], (0,), 2.0)
        L = landscape_from_diagram(d, 0)
        assert L.domain_cap == 2.0
        assert landscape_integral(L) == pytest.approx(1.0 + 0.0625)

    def test_missing_dimension(self, simple_diagram):
        with pytest.raises(ValidationError, match='not computed'):
            landscape_from_diagram(simple_diagram, 3)

    def test_matches_sorting_oracle(self, rng):
        for _ in range(30):
            points = _random_points(rng, rng.integers(1, 9))
            L = _landscape(points)
            for t in rng.uniform(-0.5, 4.5, size=25):
                for k in range(len(points) + 1):
                    expected = landscape_by_sorting(points, t, k + 1)
                    assert L.evaluate([t], k=k)[0, 0] == pytest.approx(expected, abs=1e-12)


class TestLandscapeProperties:
    def test_single_interval_integral(self, rng):
        for b, d in _random_points(rng, 100):
            L = _landscape([[b, d]])
            assert abs(landscape_integral(L) - ((d - b) / 2.0) ** 2) <= 1e-12

    def test_ordering_and_slopes(self, rng):
        for _ in range(100):
            L = _landscape(_random_points(rng, rng.integers(1, 12)))
            assert L.is_ordered()
            for level in L.levels:
                assert np.all(level[:, 1] >= 0)
                slopes = _slopes(level)
                assert np.all(np.isclose(np.abs(slopes), 1.0) | np.isclose(slopes, 0.0))

    def test_lipschitz(self, rng):
        L = _landscape(_random_points(rng, 8))
        s, t = rng.uniform(0, 4, size=(2, 200))
        assert np.all(np.abs(L.evaluate(s) - L.evaluate(t)) <= np.abs(s - t) + 1e-12)

    def test_dilation_scales_integral_quadratically(self, rng):
        points = _random_points(rng, 6)
        assert landscape_integral(_landscape(3.0 * points)) == pytest.approx(
            9.0 * landscape_integral(_landscape(points)))

    def test_additive_over_disjoint_union(self, rng):
        a = _random_points(rng, 4, scale=1.0)
        b = _random_points(rng, 4, scale=1.0) + 5.0
        union = landscape_integral(_landscape(np.vstack([a, b])))
        assert union == pytest.approx(landscape_integral(_landscape(a)) + landscape_integral(_landscape(b)))

    def test_nonzero_levels_match_betti(self, rng):
        cloud = PointCloud(rng.uniform(size=(15, 2)))
        d = compute_persistence(build_rips(distance_matrix(cloud), 2))
        L = landscape_from_diagram(d, 1)
        for t in rng.uniform(0, d.max_scale, size=20):
            if np.any(np.isclose(L.breakpoints(), t)):
                continue
            assert int(np.sum(L.evaluate([t])[:, 0] > 0)) == betti_at(d, 1, t)


class TestMeanLandscape:
    """Pointwise means"""

    def test_identical_sample(self, rng):
        L = _landscape(_random_points(rng, 5))
        mean = mean_landscape([L, L, L])
        t = rng.uniform(0, 4, size=50)
        np.testing.assert_allclose(mean.evaluate(t), L.evaluate(t), atol=1e-15)

    def test_disjoint_tents(self):
        mean = mean_landscape([_landscape([[0.0, 2.0]]), _landscape([[2.0, 4.0]])])
        np.testing.assert_allclose(mean.evaluate([1.0, 2.0, 3.0]), [[0.5, 0.0, 0.5]])

    def test_with_zero_landscape(self, rng):
        L = _landscape(_random_points(rng, 5))
        zero = PersistenceLandscape(1, ())
        mean = mean_landscape([L, zero])
        t = rng.uniform(0, 4, size=50)
        np.testing.assert_allclose(mean.evaluate(t), L.evaluate(t) / 2.0, atol=1e-15)
        assert landscape_integral(mean) == pytest.approx(landscape_integral(L) / 2.0)

    def test_mean_keeps_ordering(self, rng):
        sample = [_landscape(_random_points(rng, rng.integers(1, 7))) for _ in range(6)]
        assert mean_landscape(sample).is_ordered()

    def test_errors(self):
        with pytest.raises(ValidationError, match='non-empty'):
            mean_landscape([])
        with pytest.raises(ValidationError, match='homology dimensions'):
            mean_landscape([PersistenceLandscape(0, ()), PersistenceLandscape(1, ())])
        with pytest.raises(ValidationError, match='domain caps'):
            mean_landscape([PersistenceLandscape(1, (), 1.0), PersistenceLandscape(1, (), 2.0)])


class TestLandscapeDistance:
    def test_tent_norms(self):
        L = _landscape([[0.0, 2.0]])
        assert landscape_norm(L, 1) == pytest.approx(1.0)
        assert landscape_norm(L, 2) == pytest.approx(math.sqrt(2.0 / 3.0))
        assert landscape_norm(L, math.inf) == pytest.approx(1.0)

    def test_matches_fine_grid(self, rng):
        L1 = _landscape(_random_points(rng, 5))
        L2 = _landscape(_random_points(rng, 4))
        t = np.linspace(-1, 6, 200001)
        diff = np.abs(L1.evaluate(t, k=0)[0] - L2.evaluate(t, k=0)[0])
        for k in range(1, 5):
            diff_k = np.abs(L1.evaluate(t, k=k)[0] - L2.evaluate(t, k=k)[0])
            diff = np.vstack([np.atleast_2d(diff), diff_k])
        assert landscape_distance(L1, L2, 1) == pytest.approx(np.trapz(diff, t).sum(), rel=1e-5)
        assert landscape_distance(L1, L2, 2) == pytest.approx(math.sqrt(np.trapz(diff ** 2, t).sum()), rel=1e-5)

    def test_symmetric_and_zero_on_identity(self, rng):
        L1 = _landscape(_random_points(rng, 5))
        L2 = _landscape(_random_points(rng, 3))
        assert landscape_distance(L1, L1, 2) == 0.0
        assert landscape_distance(L1, L2, 1) == pytest.approx(landscape_distance(L2, L1, 1))

    def test_unsupported_order(self):
        L = _landscape([[0.0, 1.0]])
        with pytest.raises(ValidationError, match='p = 1, 2 or inf'):
            landscape_distance(L, L, 3)


class TestLandscapeFiles:
    """JSON and grid exports"""

    def test_json_round_trip(self, tmp_path, rng):
        L = _landscape(_random_points(rng, 6), cap=10.0)
        path = str(tmp_path / 'L.json')
        write_landscape_json(path, L)
        payload = json.load(open(path, encoding='utf-8'))
        assert set(payload) == {'dim', 'cap', 'levels'}
        back = read_landscape_json(path)
        assert back.homology_dimension == 1
        assert back.domain_cap == 10.0
        for a, b in zip(L.levels, back.levels):
            np.testing.assert_array_equal(a, b)

    def test_json_schema_errors(self, tmp_path):
        path = tmp_path / 'bad.json'
        path.write_text('{"dim": 1}', encoding='utf-8')
        with pytest.raises(SchemaError):
            read_landscape_json(str(path))
        path.write_text('{not json', encoding='utf-8')
        with pytest.raises(DataError, match='invalid JSON'):
            read_landscape_json(str(path))

    def test_grid_values(self):
        L = _landscape([[0.0, 2.0]], cap=2.0)
        t, values = grid_values(L, 4)
        np.testing.assert_allclose(t, [0.0, 0.5, 1.0, 1.5, 2.0])
        np.testing.assert_allclose(values, [[0.0, 0.5, 1.0, 0.5, 0.0]])
        with pytest.raises(ValidationError):
            grid_values(L, 0)

    def test_grid_csv(self, tmp_path):
        L = _landscape([[0.0, 2.0], [0.5, 1.5]], cap=2.0)
        path = str(tmp_path / 'grid.csv')
        write_grid_csv(path, L, 2)
        lines = open(path, encoding='utf-8').read().splitlines()
        assert lines[0] == 't,λ1,λ2'
        assert lines[2] == '1.0,1.0,0.5'
        assert len(lines) == 4

    def test_tent_helper_agrees(self):
        L = _landscape([[1.0, 3.0]])
        for t in (0.5, 1.5, 2.0, 2.7):
            assert L.evaluate([t], k=0)[0, 0] == pytest.approx(tent(t, 1.0, 3.0))
