"""
Subcommands of the tda-stats command line

Each command reads and checks every input before it writes anything, then
writes its outputs atomically into the output directory and echoes the
resolved RunConfig there as run_config.json. Problems found in the inputs
raise DataError (exit 3); problems with flags raise ValidationError (exit 2).
"""

from __future__ import annotations

import dataclasses
import os
from contextlib import contextmanager
from typing import Dict, List, Optional, Sequence, Tuple

from src.filtration.rips import build_rips, resolve_max_scale
from src.geometry.metric_space import distance_matrix, read_point_cloud, write_point_cloud
from src.geometry.samples import sample_circle, sample_circles, sample_torus
from src.inference.bands import cloud_diagram, confidence_band
from src.inference.permutation import diagram_permutation_test, landscape_functional_test
from src.inference.report import NOISE, SIGNAL
from src.inference.ttest import landscape_t_test
from src.landscape.landscape import (
    landscape_from_diagram,
    mean_landscape,
    read_landscape_json,
    write_grid_csv,
    write_landscape_json,
)
from src.persistence.diagram import PersistenceDiagram, read_barcode, read_diagram, write_barcode, write_diagram
from src.persistence.engine import compute_persistence, diagram_to_barcode
from src.statistics.distances import bottleneck, common_cap, optimal_matching
from src.statistics.frechet import frechet_functional, frechet_mean
from src.utils.errors import DataError, SchemaError, ValidationError
from src.utils.fileio import write_json
from src.utils.logger import get_logger
from src.utils.rng import STREAM_SAMPLES, generator
from src.utils.workers import ordered_map
from .plotting import plot_barcode, plot_diagram, plot_landscape
from .run_config import RunConfig

logger = get_logger('cli')

DIAGRAM_SUFFIX = '.diagram.csv'
BARCODE_SUFFIX = '.barcode.csv'
LANDSCAPE_SUFFIX = '.landscape.json'
KNOWN_SUFFIXES = (DIAGRAM_SUFFIX, BARCODE_SUFFIX, LANDSCAPE_SUFFIX, '.csv', '.json')
SHAPES = ('circle', 'two-circles', 'torus')
TWO_CIRCLE_CENTERS = ((0.0, 0.0), (-3.0, -3.0))


def stem(path) -> str:
    """File name without directory and without the summary suffix"""
    name = os.path.basename(path)
    for suffix in KNOWN_SUFFIXES:
        if name.endswith(suffix):
            return name[:-len(suffix)]
    return os.path.splitext(name)[0]


def _output(run: RunConfig, name) -> str:
    return os.path.join(run.output_dir, name)


@contextmanager
def _input_errors(*paths):
    """Report failed consistency checks on already-read inputs as DataError"""
    try:
        yield
    except ValidationError as exc:
        raise DataError(str(exc), ', '.join(str(p) for p in paths)) from exc


def _unique_stems(paths: Sequence[str]) -> List[str]:
    stems = [stem(p) for p in paths]
    if len(set(stems)) != len(stems):
        raise ValidationError('Input files must have distinct names')
    return stems


def _require_inputs(run: RunConfig, minimum=1, exact=None):
    count = len(run.inputs)
    if exact is not None and count != exact:
        raise ValidationError(f'{run.command} expects {exact} inputs, got {count}')
    if count < minimum:
        raise ValidationError(f'{run.command} expects at least {minimum} input(s), got {count}')


def _common_dims(diagrams: Sequence[PersistenceDiagram], requested) -> Tuple[int, ...]:
    if requested is not None:
        for d in diagrams:
            for h in requested:
                d.require(h)
        return tuple(requested)
    dims = set(diagrams[0].homology_dimensions)
    for d in diagrams[1:]:
        dims &= set(d.homology_dimensions)
    if not dims:
        raise ValidationError('Inputs share no homology dimension')
    return tuple(sorted(dims))


def _caps(diagrams: Sequence[PersistenceDiagram], dims, cap) -> Dict[int, Optional[float]]:
    """Truncation cap of every dimension, resolved before anything is computed"""
    return {h: common_cap(diagrams, h, cap) for h in dims}


def _cap_keys(caps: Dict[int, Optional[float]]) -> Dict[str, Optional[float]]:
    return {f'H{h}': cap for h, cap in caps.items()}


def _counts(diagram: PersistenceDiagram) -> str:
    return ' '.join(f'H{h}={diagram.count(h)}' for h in diagram.homology_dimensions)


def cmd_persist(run: RunConfig) -> List[str]:
    """Point cloud CSVs -> diagram and barcode CSVs"""
    _require_inputs(run)
    stems = _unique_stems(run.inputs)
    metric = run.metric_object
    clouds = ordered_map(lambda path: read_point_cloud(path, run.csv_delimiter, run.csv_skip_header),
                         run.inputs, run.workers)
    matrices = ordered_map(lambda cloud: distance_matrix(cloud, metric), clouds, run.workers)
    if run.max_scale is None:
        # One scale for all inputs keeps their diagrams comparable.
        run = run.resolved(max_scale=max(resolve_max_scale(dm) for dm in matrices))
    logger.info('Persistence of %d cloud(s) at max_scale=%g, max_dim=%d',
                len(clouds), run.max_scale, run.max_dimension)

    diagrams = ordered_map(lambda dm: compute_persistence(build_rips(dm, run.max_dimension, run.max_scale)),
                           matrices, run.workers)
    written = []
    for name, diagram in zip(stems, diagrams):
        diagram_path = _output(run, name + DIAGRAM_SUFFIX)
        barcode_path = _output(run, name + BARCODE_SUFFIX)
        write_diagram(diagram_path, diagram)
        write_barcode(barcode_path, diagram_to_barcode(diagram), diagram.max_scale)
        written += [diagram_path, barcode_path]
        print(f'✓ {name}: {_counts(diagram)}')
    written.append(run.write())
    return written


def cmd_landscape(run: RunConfig) -> List[str]:
    """Diagram CSVs -> landscape JSON (and a sampled grid CSV) per homology dimension"""
    _require_inputs(run)
    stems = _unique_stems(run.inputs)
    diagrams = [read_diagram(path) for path in run.inputs]
    planned = []
    for path, name, diagram in zip(run.inputs, stems, diagrams):
        with _input_errors(path):
            for h in _common_dims([diagram], run.dims):
                planned.append((name, h, landscape_from_diagram(diagram, h, run.truncation_cap)))
    run = run.with_caps({f'{name}.H{h}': landscape.domain_cap for name, h, landscape in planned})

    written = []
    for name, h, landscape in planned:
        json_path = _output(run, f'{name}.H{h}{LANDSCAPE_SUFFIX}')
        write_landscape_json(json_path, landscape)
        written.append(json_path)
        if run.option('grid', True):
            grid_path = _output(run, f'{name}.H{h}.landscape.csv')
            write_grid_csv(grid_path, landscape, run.grid_resolution)
            written.append(grid_path)
        print(f'✓ {name} H{h}: {len(landscape)} level(s)')
    written.append(run.write())
    return written


def cmd_distance(run: RunConfig) -> List[str]:
    """Wasserstein and bottleneck distances between two diagram files"""
    _require_inputs(run, exact=2)
    first, second = (read_diagram(path) for path in run.inputs)
    with _input_errors(*run.inputs):
        caps = _caps((first, second), _common_dims([first, second], run.dims), run.truncation_cap)
    run = run.with_caps(_cap_keys(caps))
    results = {}
    for h, cap in caps.items():
        matching = optimal_matching(first, second, h, run.wasserstein_p, cap)
        results[f'H{h}'] = {
            'wasserstein': matching.distance,
            'bottleneck': bottleneck(first, second, h, cap),
            'cap': cap,
            'matching': matching.to_dict(),
        }
        print(f"✓ H{h}: W{run.wasserstein_p:g}={matching.distance:.6g} "
              f"bottleneck={results[f'H{h}']['bottleneck']:.6g}")
    path = _output(run, 'distance.json')
    write_json(path, {'first': run.inputs[0], 'second': run.inputs[1], 'dims': results})
    return [path, run.write()]


def _expand(paths: Sequence[str], suffix) -> List[str]:
    """Files as given; directories replaced by their sorted ``suffix`` files"""
    expanded = []
    for path in paths:
        if os.path.isdir(path):
            expanded += sorted(os.path.join(path, name) for name in os.listdir(path) if name.endswith(suffix))
        else:
            expanded.append(path)
    return expanded


def cmd_mean(run: RunConfig) -> List[str]:
    """Frechet mean and variance of a sample of diagrams"""
    _require_inputs(run)
    paths = _expand(run.inputs, DIAGRAM_SUFFIX)
    if not paths:
        raise ValidationError('No diagram files found')
    stems = _unique_stems(paths)
    sample = [read_diagram(path) for path in paths]
    with _input_errors(*run.inputs):
        caps = _caps(sample, _common_dims(sample, run.dims), run.truncation_cap)
    run = run.with_caps(_cap_keys(caps))

    results = []
    for h, cap in caps.items():
        result = frechet_mean(sample, h, cap, run.frechet_max_iter, run.workers)
        functional = {name: frechet_functional(d, sample, h, cap, run.workers) for name, d in zip(stems, sample)}
        results.append((h, cap, result, functional))

    written = []
    for h, cap, result, functional in results:
        mean_path = _output(run, f'mean.H{h}{DIAGRAM_SUFFIX}')
        report_path = _output(run, f'frechet.H{h}.json')
        write_diagram(mean_path, result.mean)
        write_json(report_path, dict(result.to_dict(), cap=cap, functional_at_inputs=functional))
        written += [mean_path, report_path]
        state = 'converged' if result.converged else 'stopped'
        print(f'✓ H{h}: variance={result.variance:.6g} after {result.iterations} iteration(s) ({state})')
    written.append(run.write())
    return written


def cmd_band(run: RunConfig) -> List[str]:
    """Bootstrap confidence band of one point cloud, with the signal diagram"""
    _require_inputs(run, exact=1)
    path = run.inputs[0]
    cloud = read_point_cloud(path, run.csv_delimiter, run.csv_skip_header)
    metric = run.metric_object
    run = run.resolved(max_scale=resolve_max_scale(distance_matrix(cloud, metric), run.max_scale))
    full = cloud_diagram(cloud, metric, run.max_dimension, run.max_scale)
    dims = _common_dims([full], run.dims)

    name = stem(path)
    written = []
    signal_pairs = []
    for h in dims:
        band = confidence_band(cloud, h, run.alpha, run.bootstrap_rounds, run.seed, metric,
                               run.max_dimension, run.max_scale, run.workers)
        labels = [label for _, label in band.classify(full, h)]
        signal_pairs += band.significant_features(full, h).pairs
        band_path = _output(run, f'{name}.band.H{h}.json')
        write_json(band_path, dict(band.to_dict(), signal=labels.count(SIGNAL), noise=labels.count(NOISE)))
        written.append(band_path)
        print(f'✓ H{h}: c_n={band.c_n:.6g}, {labels.count(SIGNAL)} signal / {labels.count(NOISE)} noise')

    diagram_path = _output(run, name + DIAGRAM_SUFFIX)
    signal_path = _output(run, f'{name}.signal{DIAGRAM_SUFFIX}')
    write_diagram(diagram_path, full)
    write_diagram(signal_path, PersistenceDiagram(signal_pairs, dims, full.max_scale))
    written += [diagram_path, signal_path, run.write()]
    return written


def _group_files(directory) -> Tuple[List[str], List[str]]:
    """(diagram files, landscape files) of a summary directory"""
    if not os.path.isdir(directory):
        raise ValidationError(f'{directory} is not a directory')
    names = sorted(os.listdir(directory))
    diagrams = [n for n in names if n.endswith(DIAGRAM_SUFFIX)]
    if not diagrams:
        diagrams = [n for n in names if n.endswith('.csv') and not n.endswith(BARCODE_SUFFIX)
                    and not n.endswith('.landscape.csv')]
    landscapes = [n for n in names if n.endswith(LANDSCAPE_SUFFIX)]
    return ([os.path.join(directory, n) for n in diagrams],
            [os.path.join(directory, n) for n in landscapes])


def _require_group_sizes(groups, label):
    if any(len(group) < 2 for group in groups):
        raise ValidationError(f'Each directory must hold at least 2 {label} summaries')


def _landscape_groups(run: RunConfig, landscape_files, diagram_files):
    """
    Landscape groups and truncation cap per homology dimension

    Landscape JSON files are used when both directories have them; otherwise
    landscapes are built from the diagrams at a cap shared by both groups.
    """
    if all(landscape_files):
        groups = [[read_landscape_json(p) for p in files] for files in landscape_files]
        dims = sorted({L.homology_dimension for group in groups for L in group})
        if run.dims is None and len(dims) > 1:
            raise ValidationError(f'Landscapes mix homology dimensions {dims}; select one with --dims')
        selected = run.dims if run.dims is not None else dims
        by_dim, caps = {}, {}
        for h in selected:
            first, second = ([L for L in group if L.homology_dimension == h] for group in groups)
            _require_group_sizes((first, second), f'H{h}')
            domain_caps = {L.domain_cap for L in first + second}
            if len(domain_caps) > 1:
                raise ValidationError(f'H{h} landscapes have different domain caps {sorted(domain_caps, key=str)}')
            by_dim[h], caps[h] = (first, second), domain_caps.pop()
        return by_dim, caps
    if not all(diagram_files):
        raise ValidationError('Both directories need landscape JSON or diagram CSV files')
    groups = [[read_diagram(p) for p in files] for files in diagram_files]
    _require_group_sizes(groups, 'diagram')
    pooled = groups[0] + groups[1]
    caps = _caps(pooled, _common_dims(pooled, run.dims), run.truncation_cap)
    by_dim = {h: tuple([landscape_from_diagram(d, h, cap) for d in group] for group in groups)
              for h, cap in caps.items()}
    return by_dim, caps


def cmd_test(run: RunConfig) -> List[str]:
    """Two-sample test between two directories of summaries"""
    _require_inputs(run, exact=2)
    diagram_files, landscape_files = zip(*(_group_files(d) for d in run.inputs))
    reports = []
    if run.test_kind == 'diagram':
        groups = [[read_diagram(p) for p in files] for files in diagram_files]
        with _input_errors(*run.inputs):
            _require_group_sizes(groups, 'diagram')
            pooled = groups[0] + groups[1]
            caps = _caps(pooled, _common_dims(pooled, run.dims), run.truncation_cap)
        for h, cap in caps.items():
            reports.append(diagram_permutation_test(groups[0], groups[1], h, run.wasserstein_p,
                                                    run.permutations, run.seed, cap, run.workers))
    else:
        with _input_errors(*run.inputs):
            by_dim, caps = _landscape_groups(run, landscape_files, diagram_files)
        for h, (first, second) in sorted(by_dim.items()):
            if run.test_kind == 't':
                reports.append(landscape_t_test(first, second, run.seed))
            else:
                reports.append(landscape_functional_test(first, second, run.permutations, run.seed, run.workers))
    run = run.with_caps(_cap_keys(caps))

    reports = [dataclasses.replace(report, tests_run=len(reports)) for report in reports]
    path = _output(run, 'test.json')
    write_json(path, {
        'kind': run.test_kind,
        'groups': list(run.inputs),
        'caps': _cap_keys(caps),
        'reports': [report.to_dict() for report in reports],
    })
    for report in reports:
        print(f'✓ {report.summary()}')
    print(f'  report: {path}')
    return [path, run.write()]


def _read_plot_input(path):
    """(kind, summary, max_scale) of one plot input; unknown types are rejected"""
    name = os.path.basename(path)
    if name.endswith('.json'):
        return 'landscape', read_landscape_json(path), None
    if name.endswith(BARCODE_SUFFIX):
        return 'barcode', read_barcode(path), read_diagram(path).max_scale
    if name.endswith('.csv'):
        return 'diagram', read_diagram(path), None
    raise SchemaError('unknown summary file type (expected .csv or .json)', path)


def cmd_plot(run: RunConfig) -> List[str]:
    """SVG plots of diagram, barcode and landscape files"""
    _require_inputs(run)
    inputs = [(path,) + _read_plot_input(path) for path in run.inputs]
    landscapes = [(path, summary) for path, kind, summary, _ in inputs if kind == 'landscape']
    mean = None
    if landscapes and run.option('mean', False):
        with _input_errors(*(path for path, _ in landscapes)):
            mean = mean_landscape([L for _, L in landscapes])

    written = []
    for path, kind, summary, max_scale in inputs:
        if kind == 'barcode':
            out = _output(run, stem(path) + '.barcode.svg')
            plot_barcode(out, summary, max_scale, title=stem(path))
        elif kind == 'diagram':
            out = _output(run, stem(path) + '.diagram.svg')
            plot_diagram(out, summary, title=stem(path))
        elif mean is None:
            out = _output(run, stem(path) + '.landscape.svg')
            plot_landscape(out, [summary], title=stem(path))
        else:
            continue
        written.append(out)
    if mean is not None:
        out = _output(run, 'landscapes.svg')
        plot_landscape(out, [L for _, L in landscapes], mean, title=f'H{mean.homology_dimension} landscapes')
        written.append(out)
    for out in written:
        print(f'✓ {out}')
    written.append(run.write())
    return written


def cmd_sample(run: RunConfig) -> List[str]:
    """Synthetic point cloud CSVs; cloud i is drawn from stream (seed, i)"""
    shape = run.option('shape', 'circle')
    if shape not in SHAPES:
        raise ValidationError(f"--shape must be one of {', '.join(SHAPES)}")
    n = run.option('n', 100)
    count = run.option('count', 1)
    noise = run.option('noise', 0.0)
    radius = run.option('radius', 1.0)
    if n < 1 or count < 1 or noise < 0 or not radius > 0:
        raise ValidationError('--n and --count must be positive, --noise >= 0 and --radius > 0')

    written = []
    for index in range(count):
        rng = generator(run.seed, STREAM_SAMPLES, index)
        if shape == 'circle':
            cloud = sample_circle(n, rng, radius=radius, noise=noise)
        elif shape == 'two-circles':
            cloud = sample_circles(n, rng, TWO_CIRCLE_CENTERS, radius=radius, noise=noise)
        else:
            cloud = sample_torus(n, rng)
        path = _output(run, f'{shape}-{index:03d}.csv')
        write_point_cloud(path, cloud, run.csv_delimiter)
        written.append(path)
    print(f'✓ {count} {shape} cloud(s) of {n} point(s) in {run.output_dir}')
    written.append(run.write())
    return written


COMMANDS = {
    'persist': cmd_persist,
    'landscape': cmd_landscape,
    'distance': cmd_distance,
    'mean': cmd_mean,
    'band': cmd_band,
    'test': cmd_test,
    'plot': cmd_plot,
    'sample': cmd_sample,
}
