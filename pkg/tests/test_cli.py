"""
End-to-end tests of the tda-stats command line
"""

import json
import os

import numpy as np
import pytest

from src.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, RunConfig, build_parser, run
from src.geometry import PointCloud, read_point_cloud, sample_circles, write_point_cloud
from src.landscape import landscape_from_diagram, level_integrals
from src.persistence import read_diagram
from src.utils import Config, EXHAUSTIVE, ValidationError


@pytest.fixture(autouse=True)
def in_tmp(tmp_path, monkeypatch):
    """Run every command from an empty directory without a .env file"""
    monkeypatch.chdir(tmp_path)


def tda(*argv):
    return run(list(argv) + ['--env-file', 'missing.env'])


def _jittered_circle(rng, n=16, center=(0.0, 0.0)):
    """Nearly regular n-gon on the unit circle, randomly rotated"""
    angles = 2.0 * np.pi * (np.arange(n) + rng.uniform(-0.05, 0.05, size=n)) / n + rng.uniform(0, 2 * np.pi)
    return np.column_stack([np.cos(angles), np.sin(angles)]) + np.asarray(center)


def _write_groups(tmp_path, rng, count=7):
    """``count`` one-circle clouds in a/ and ``count`` two-circle clouds in b/"""
    for index in range(count):
        write_point_cloud(str(tmp_path / 'a' / f'c{index}.csv'), PointCloud(_jittered_circle(rng)))
        two = np.vstack([_jittered_circle(rng), _jittered_circle(rng, center=(-3.0, -3.0))])
        write_point_cloud(str(tmp_path / 'b' / f'c{index}.csv'), PointCloud(two))
    return (sorted(str(p) for p in (tmp_path / 'a').glob('*.csv')),
            sorted(str(p) for p in (tmp_path / 'b').glob('*.csv')))


class TestParser:
    def test_subcommands(self):
        parser = build_parser()
        args = parser.parse_args(['test', 'x', 'y', '--test-kind', 't', '--perms', 'exhaustive'])
        assert args.command == 'test'
        assert args.inputs == ['x', 'y']
        assert args.test_kind == 't'

    def test_run_config_merges_flags_over_environment(self, tmp_path, monkeypatch):
        monkeypatch.setenv('TDA_SEED', '5')
        monkeypatch.setenv('TDA_MAX_SCALE', '1.5')
        args = build_parser().parse_args(['persist', 'a.csv', '--seed', '9', '--dims', '1'])
        run_config = RunConfig.from_sources('persist', Config('missing.env'), args)
        assert run_config.seed == 9
        assert run_config.max_scale == 1.5
        assert run_config.dims == (1,)
        assert run_config.permutations == 'auto'

    def test_run_config_validation(self):
        with pytest.raises(ValidationError, match='alpha'):
            RunConfig('band', alpha=1.0)
        with pytest.raises(ValidationError, match='perms'):
            RunConfig('test', permutations=0)
        with pytest.raises(ValidationError, match='test-kind'):
            RunConfig('test', test_kind='anova')
        assert RunConfig('test', permutations=EXHAUSTIVE).to_dict()['permutations'] == EXHAUSTIVE


class TestExitCodes:
    """Usage problems exit with 2, data problems with 3"""

    def test_unknown_command(self):
        assert run(['frobnicate']) == EXIT_USAGE

    def test_version(self, capsys):
        assert run(['--version']) == EXIT_OK
        assert 'tda-stats' in capsys.readouterr().out

    def test_invalid_environment(self, monkeypatch, capsys):
        monkeypatch.setenv('TDA_ALPHA', '7')
        assert tda('sample') == EXIT_USAGE
        out = capsys.readouterr().out
        assert 'Configuration errors:' in out
        assert 'TDA_ALPHA' in out

    def test_invalid_flag_value(self, capsys):
        assert tda('band', 'cloud.csv', '--alpha', '1.5') == EXIT_USAGE
        assert '✗' in capsys.readouterr().out

    def test_missing_input(self, capsys):
        assert tda('persist', 'nowhere.csv') == EXIT_DATA
        assert 'nowhere.csv' in capsys.readouterr().out

    def test_malformed_input(self, write_csv):
        path = write_csv('bad.csv', [(0.0, 1.0), (2.0, 'x')])
        assert tda('persist', path) == EXIT_DATA

    def test_unknown_summary_type(self, tmp_path):
        path = tmp_path / 'notes.txt'
        path.write_text('hello', encoding='utf-8')
        assert tda('plot', str(path)) == EXIT_DATA


def _diagram_file(name, text):
    with open(name, 'w', encoding='utf-8') as handle:
        handle.write(text)
    return name


CIRCLE_DIAGRAM = '# dims=0 1\n# max_scale=2.0\ndim,birth,death\n0,0.0,inf\n1,0.5,1.0\n'


class TestInputsCheckedFirst:
    """A failing input leaves the output directory untouched"""

    def test_plot_rejects_before_drawing(self, tmp_path):
        good = _diagram_file('good.diagram.csv', CIRCLE_DIAGRAM)
        _diagram_file('bad.txt', 'hello')
        assert tda('plot', good, 'bad.txt', '--out', 'o') == EXIT_DATA
        assert not (tmp_path / 'o').exists()

    def test_landscape_checks_every_diagram(self, tmp_path, capsys):
        first = _diagram_file('a.diagram.csv', CIRCLE_DIAGRAM)
        second = _diagram_file('b.diagram.csv', '# dims=0\n# max_scale=2.0\ndim,birth,death\n0,0.0,inf\n')
        assert tda('landscape', first, second, '--dims', '1', '--out', 'o') == EXIT_DATA
        assert not (tmp_path / 'o').exists()
        assert 'b.diagram.csv' in capsys.readouterr().out

    def test_mean_rejects_mismatched_caps(self, tmp_path):
        first = _diagram_file('a.diagram.csv', CIRCLE_DIAGRAM)
        second = _diagram_file('b.diagram.csv', CIRCLE_DIAGRAM.replace('max_scale=2.0', 'max_scale=3.0'))
        assert tda('mean', first, second, '--out', 'o') == EXIT_DATA
        assert not (tmp_path / 'o').exists()

    def test_malformed_metadata_names_the_line(self, tmp_path, capsys):
        path = _diagram_file('z.diagram.csv', 'dim,birth,death\n# dims=zero\n0,0.0,1.0\n')
        assert tda('landscape', path, '--out', 'o') == EXIT_DATA
        assert 'z.diagram.csv:2: malformed dims' in capsys.readouterr().out
        assert not (tmp_path / 'o').exists()

    def test_out_of_range_metadata_is_a_data_error(self, capsys):
        path = _diagram_file('z.diagram.csv', '# max_scale=-1\ndim,birth,death\n0,0.0,1.0\n')
        assert tda('distance', path, path) == EXIT_DATA
        assert 'z.diagram.csv:1: max_scale must be a positive real' in capsys.readouterr().out


class TestConfigurationDisplay:
    def test_debug_level_shows_settings(self, capsys):
        assert tda('sample', '--n', '4', '--out', 's', '--log-level', 'DEBUG') == EXIT_OK
        out = capsys.readouterr().out
        assert 'Filtration Configuration:' in out
        assert 'Workers: 4' in out

    def test_default_level_is_quiet(self, capsys):
        assert tda('sample', '--n', '4', '--out', 's') == EXIT_OK
        assert 'Filtration Configuration:' not in capsys.readouterr().out


class TestSampleCommand:
    def test_writes_clouds_and_config(self, tmp_path, capsys):
        assert tda('sample', '--shape', 'two-circles', '--n', '10', '--count', '3', '--seed', '4',
                   '--out', 'clouds') == EXIT_OK
        files = sorted(os.listdir(tmp_path / 'clouds'))
        assert files == ['run_config.json', 'two-circles-000.csv', 'two-circles-001.csv', 'two-circles-002.csv']
        cloud = read_point_cloud(str(tmp_path / 'clouds' / 'two-circles-001.csv'))
        assert cloud.size == 20
        echoed = json.load(open(tmp_path / 'clouds' / 'run_config.json', encoding='utf-8'))
        assert echoed['seed'] == 4
        assert echoed['extra']['shape'] == 'two-circles'
        assert '✓ 3 two-circles' in capsys.readouterr().out

    def test_reproducible(self, tmp_path):
        tda('sample', '--n', '8', '--seed', '1', '--out', 'one')
        tda('sample', '--n', '8', '--seed', '1', '--out', 'two', '--workers', '2')
        first = (tmp_path / 'one' / 'circle-000.csv').read_bytes()
        assert first == (tmp_path / 'two' / 'circle-000.csv').read_bytes()


class TestPipeline:
    """persist -> landscape -> distance / mean / test / plot"""

    @pytest.fixture
    def clouds(self, tmp_path, rng):
        return _write_groups(tmp_path, rng, count=3)

    def test_persist_outputs(self, tmp_path, clouds, capsys):
        first, _ = clouds
        assert tda('persist', *first, '--max-dim', '2', '--max-scale', '2.0', '--out', 'pa') == EXIT_OK
        out = capsys.readouterr().out
        assert '✓ c0: H0=16 H1=' in out
        d = read_diagram(str(tmp_path / 'pa' / 'c0.diagram.csv'))
        assert d.homology_dimensions == (0, 1)
        assert d.max_scale == 2.0
        assert (tmp_path / 'pa' / 'c0.barcode.csv').exists()
        echoed = json.load(open(tmp_path / 'pa' / 'run_config.json', encoding='utf-8'))
        assert echoed['max_scale'] == 2.0

    def test_auto_scale_is_shared(self, tmp_path, clouds):
        _, second = clouds
        assert tda('persist', *second, '--max-dim', '1', '--out', 'pb') == EXIT_OK
        scales = {read_diagram(str(tmp_path / 'pb' / f'c{i}.diagram.csv')).max_scale for i in range(3)}
        assert len(scales) == 1

    def test_landscape_distance_mean(self, tmp_path, clouds, capsys):
        first, _ = clouds
        tda('persist', *first, '--max-scale', '2.0', '--out', 'pa')
        diagrams = sorted(str(p) for p in (tmp_path / 'pa').glob('*.diagram.csv'))
        assert tda('landscape', *diagrams, '--grid-resolution', '10', '--out', 'la') == EXIT_OK
        names = set(os.listdir(tmp_path / 'la'))
        assert {'c0.H0.landscape.json', 'c0.H1.landscape.json', 'c0.H1.landscape.csv'} <= names
        grid = (tmp_path / 'la' / 'c0.H1.landscape.csv').read_text(encoding='utf-8').splitlines()
        assert len(grid) == 12

        assert tda('distance', diagrams[0], diagrams[1], '--dims', '1', '--out', 'dist') == EXIT_OK
        payload = json.load(open(tmp_path / 'dist' / 'distance.json', encoding='utf-8'))
        h1 = payload['dims']['H1']
        assert 0 <= h1['bottleneck'] <= h1['wasserstein']

        assert tda('mean', str(tmp_path / 'pa'), '--out', 'mean') == EXIT_OK
        report = json.load(open(tmp_path / 'mean' / 'frechet.H1.json', encoding='utf-8'))
        assert set(report['functional_at_inputs']) == {'c0', 'c1', 'c2'}
        assert all(report['variance'] <= v + 1e-12 for v in report['functional_at_inputs'].values())
        assert (tmp_path / 'mean' / 'mean.H0.diagram.csv').exists()

    def test_landscape_without_grid(self, tmp_path, clouds):
        first, _ = clouds
        tda('persist', first[0], '--max-scale', '2.0', '--out', 'pa')
        assert tda('landscape', str(tmp_path / 'pa' / 'c0.diagram.csv'), '--no-grid', '--dims', '1',
                   '--out', 'la') == EXIT_OK
        assert sorted(os.listdir(tmp_path / 'la')) == ['c0.H1.landscape.json', 'run_config.json']

    def test_test_kinds(self, tmp_path, clouds, capsys):
        first, second = clouds
        tda('persist', *first, '--max-scale', '2.0', '--out', 'pa')
        tda('persist', *second, '--max-scale', '2.0', '--out', 'pb')
        for kind in ('landscape', 'diagram', 't'):
            assert tda('test', 'pa', 'pb', '--test-kind', kind, '--dims', '1', '--out', kind) == EXIT_OK
            payload = json.load(open(tmp_path / kind / 'test.json', encoding='utf-8'))
            assert payload['kind'] == kind
            [report] = payload['reports']
            assert report['homology_dimension'] == 1
            assert report['tests_run'] == 1
            assert 0 < report['p_value'] <= 1
        assert 'report: ' in capsys.readouterr().out

    def test_resolved_caps_are_recorded(self, tmp_path, clouds):
        first, second = clouds
        tda('persist', *first, '--max-scale', '2.0', '--out', 'pa')
        tda('persist', *second, '--max-scale', '2.0', '--out', 'pb')
        assert tda('test', 'pa', 'pb', '--test-kind', 'diagram', '--dims', '0', '--out', 'res') == EXIT_OK
        payload = json.load(open(tmp_path / 'res' / 'test.json', encoding='utf-8'))
        echoed = json.load(open(tmp_path / 'res' / 'run_config.json', encoding='utf-8'))
        assert payload['caps'] == {'H0': 2.0}
        assert echoed['truncation_cap'] is None
        assert echoed['resolved_caps'] == {'H0': 2.0}

        assert tda('landscape', str(tmp_path / 'pa' / 'c0.diagram.csv'), '--dims', '0', '--no-grid',
                   '--out', 'la') == EXIT_OK
        echoed = json.load(open(tmp_path / 'la' / 'run_config.json', encoding='utf-8'))
        assert echoed['resolved_caps'] == {'c0.H0': 2.0}

    def test_explicit_cap_wins(self, tmp_path, clouds):
        first, _ = clouds
        tda('persist', first[0], first[1], '--max-scale', '2.0', '--out', 'pa')
        diagrams = sorted(str(p) for p in (tmp_path / 'pa').glob('*.diagram.csv'))
        assert tda('distance', *diagrams, '--dims', '0', '--cap', '1.5', '--out', 'dist') == EXIT_OK
        payload = json.load(open(tmp_path / 'dist' / 'distance.json', encoding='utf-8'))
        echoed = json.load(open(tmp_path / 'dist' / 'run_config.json', encoding='utf-8'))
        assert payload['dims']['H0']['cap'] == 1.5
        assert echoed['resolved_caps'] == {'H0': 1.5}

    def test_test_needs_two_per_group(self, tmp_path, clouds):
        first, second = clouds
        tda('persist', first[0], '--max-scale', '2.0', '--out', 'pa')
        tda('persist', *second, '--max-scale', '2.0', '--out', 'pb')
        assert tda('test', 'pa', 'pb') == EXIT_DATA

    def test_mixed_landscape_dims_need_selection(self, tmp_path, clouds):
        first, second = clouds
        for group, out in ((first, 'a'), (second, 'b')):
            tda('persist', *group, '--max-scale', '2.0', '--out', 'p' + out)
            diagrams = sorted(str(p) for p in (tmp_path / ('p' + out)).glob('*.diagram.csv'))
            tda('landscape', *diagrams, '--out', 'l' + out)
        assert tda('test', 'la', 'lb') == EXIT_DATA
        assert tda('test', 'la', 'lb', '--dims', '0', '1', '--out', 'res') == EXIT_OK
        payload = json.load(open(tmp_path / 'res' / 'test.json', encoding='utf-8'))
        assert [r['tests_run'] for r in payload['reports']] == [2, 2]


class TestBandCommand:
    def test_band_outputs(self, tmp_path):
        angles = 2.0 * np.pi * np.arange(20) / 20
        write_point_cloud('ring.csv', PointCloud(np.column_stack([np.cos(angles), np.sin(angles)])))
        assert tda('band', 'ring.csv', '--boot', '6', '--max-scale', '2.0', '--dims', '1',
                   '--seed', '3', '--out', 'band') == EXIT_OK
        band = json.load(open(tmp_path / 'band' / 'ring.band.H1.json', encoding='utf-8'))
        assert band['bootstrap_rounds'] == 6
        assert len(band['distances']) == 6
        assert band['signal'] == 1
        signal = read_diagram(str(tmp_path / 'band' / 'ring.signal.diagram.csv'))
        assert signal.count(1) == 1


class TestPlotCommand:
    """SVG output"""

    @pytest.fixture
    def summaries(self, tmp_path, rng):
        write_point_cloud('ring.csv', PointCloud(_jittered_circle(rng, n=10)))
        tda('persist', 'ring.csv', '--max-scale', '2.0', '--out', 'p')
        tda('landscape', 'p/ring.diagram.csv', '--out', 'l')
        return tmp_path

    def test_barcode_has_one_line_per_bar(self, summaries):
        assert tda('plot', 'p/ring.barcode.csv', '--out', 'svg') == EXIT_OK
        svg = (summaries / 'svg' / 'ring.barcode.svg').read_text(encoding='utf-8')
        bars = read_diagram(str(summaries / 'p' / 'ring.barcode.csv'))
        assert svg.startswith('<?xml')
        assert svg.count('id="bar-') == len(bars)

    def test_plots_are_byte_identical(self, summaries):
        inputs = ['p/ring.diagram.csv', 'p/ring.barcode.csv', 'l/ring.H1.landscape.json']
        assert tda('plot', *inputs, '--out', 'one') == EXIT_OK
        assert tda('plot', *inputs, '--out', 'two') == EXIT_OK
        for name in ('ring.diagram.svg', 'ring.barcode.svg', 'ring.H1.landscape.svg'):
            assert (summaries / 'one' / name).read_bytes() == (summaries / 'two' / name).read_bytes()

    def test_mean_overlay(self, summaries):
        assert tda('plot', 'l/ring.H0.landscape.json', 'l/ring.H0.landscape.json', '--mean',
                   '--out', 'svg') == EXIT_OK
        svg = (summaries / 'svg' / 'landscapes.svg').read_text(encoding='utf-8')
        assert 'id="mean-1"' in svg

    def test_empty_diagram(self, tmp_path):
        (tmp_path / 'empty.diagram.csv').write_text('dim,birth,death\n# dims=0 1\n', encoding='utf-8')
        assert tda('plot', 'empty.diagram.csv', '--out', 'svg') == EXIT_OK
        assert (tmp_path / 'svg' / 'empty.diagram.svg').exists()


class TestDeterminism:
    def test_outputs_identical_across_runs_and_workers(self, tmp_path, rng):
        first, second = _write_groups(tmp_path, rng, count=3)
        for out, workers in (('one', '1'), ('two', '4')):
            tda('persist', *first, '--max-scale', '2.0', '--workers', workers, '--out', f'{out}/a')
            tda('persist', *second, '--max-scale', '2.0', '--workers', workers, '--out', f'{out}/b')
            tda('test', f'{out}/a', f'{out}/b', '--test-kind', 'diagram', '--dims', '1', '--perms', '50',
                '--seed', '8', '--workers', workers, '--out', f'{out}/t')
        for relative in ('a/c0.diagram.csv', 'a/c2.barcode.csv', 'b/c1.diagram.csv'):
            assert (tmp_path / 'one' / relative).read_bytes() == (tmp_path / 'two' / relative).read_bytes()
        reports = [json.load(open(tmp_path / out / 't' / 'test.json', encoding='utf-8'))['reports']
                   for out in ('one', 'two')]
        assert reports[0] == reports[1]


class TestAcceptance:
    """Reproductions of the published structure and p-value floor"""

    def test_seven_versus_seven_reaches_the_floor(self, tmp_path, rng):
        first, second = _write_groups(tmp_path, rng, count=7)
        assert tda('persist', *first, '--max-dim', '2', '--max-scale', '2.0', '--out', 'pa') == EXIT_OK
        assert tda('persist', *second, '--max-dim', '2', '--max-scale', '2.0', '--out', 'pb') == EXIT_OK
        for group in ('a', 'b'):
            diagrams = sorted(str(p) for p in (tmp_path / f'p{group}').glob('*.diagram.csv'))
            assert tda('landscape', *diagrams, '--no-grid', '--out', f'l{group}') == EXIT_OK
        assert tda('test', 'la', 'lb', '--dims', '0', '1', '--perms', 'exhaustive', '--out', 'res') == EXIT_OK
        reports = json.load(open(tmp_path / 'res' / 'test.json', encoding='utf-8'))['reports']
        assert [r['homology_dimension'] for r in reports] == [0, 1]
        for report in reports:
            assert report['permutations_used'] == EXHAUSTIVE
            assert report['splits'] == 1716
            assert report['p_value'] == 1.0 / 1716
            assert round(report['p_value'], 6) == 0.000583

    @pytest.mark.slow
    def test_two_circle_structure(self, tmp_path):
        rng = np.random.default_rng(5)
        cloud = sample_circles(100, rng, ((0.0, 0.0), (-3.0, -3.0)))
        write_point_cloud('fig.csv', cloud)
        assert tda('persist', 'fig.csv', '--max-dim', '1', '--max-scale', '2.0', '--out', 'h0') == EXIT_OK
        assert tda('persist', 'fig.csv', '--max-dim', '2', '--max-scale', '1.2', '--out', 'h1') == EXIT_OK
        h0 = read_diagram('h0/fig.diagram.csv')
        h1 = read_diagram('h1/fig.diagram.csv')
        assert sum(1 for p in h0.in_dimension(0) if p.death > 1.5) == 2
        assert sum(1 for p in h1.in_dimension(1) if p.persistence > 0.5) == 2
        integrals = level_integrals(landscape_from_diagram(h0, 0))
        assert integrals[0] >= 5 * integrals[2]
        assert integrals[1] >= 5 * integrals[2]
