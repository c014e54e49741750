"""
Resolved settings of one CLI run
"""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, field, replace
from typing import Dict, Optional, Tuple, Union

from src.geometry.metric_space import Metric
from src.utils.config import AUTO, EXHAUSTIVE, Config
from src.utils.errors import ValidationError
from src.utils.fileio import write_json

RUN_CONFIG_FILE = 'run_config.json'
TEST_KINDS = ('landscape', 'diagram', 't')
EXTRA_OPTIONS = ('shape', 'n', 'count', 'noise', 'radius', 'mean', 'grid')


@dataclass(frozen=True)
class RunConfig:
    """
    Environment settings merged with command-line overrides

    ``max_scale`` and ``truncation_cap`` are None while still AUTO; commands
    resolve them against the data and store the numbers with ``resolved``
    before anything is computed or written. With an AUTO cap the caps
    taken from the diagrams are kept per summary in ``resolved_caps``.
    """

    command: str
    inputs: Tuple[str, ...] = ()
    metric: str = 'p2'
    max_dimension: int = 2
    max_scale: Optional[float] = None
    truncation_cap: Optional[float] = None
    alpha: float = 0.05
    permutations: Union[int, str] = AUTO
    bootstrap_rounds: int = 200
    seed: int = 0
    output_dir: str = 'out'
    grid_resolution: int = 200
    dims: Optional[Tuple[int, ...]] = None
    test_kind: str = 'landscape'
    wasserstein_p: float = 2.0
    frechet_max_iter: int = 100
    csv_delimiter: str = ','
    csv_skip_header: bool = False
    workers: int = 4
    extra: Tuple[Tuple[str, object], ...] = field(default=())
    resolved_caps: Tuple[Tuple[str, Optional[float]], ...] = field(default=())

    def __post_init__(self):
        Metric.parse(self.metric)
        if self.max_dimension < 0:
            raise ValidationError(f'--max-dim must be >= 0, got {self.max_dimension}')
        for name in ('max_scale', 'truncation_cap'):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ValidationError(f'{name} must be positive, got {value}')
        if not 0.0 < self.alpha < 1.0:
            raise ValidationError(f'--alpha must lie in (0, 1), got {self.alpha}')
        if self.permutations not in (AUTO, EXHAUSTIVE) and (
                not isinstance(self.permutations, int) or self.permutations < 1):
            raise ValidationError(f'--perms must be a positive integer, auto or exhaustive: {self.permutations}')
        for name in ('bootstrap_rounds', 'grid_resolution', 'frechet_max_iter', 'workers'):
            if getattr(self, name) < 1:
                raise ValidationError(f'{name} must be a positive integer, got {getattr(self, name)}')
        if self.seed < 0:
            raise ValidationError(f'--seed must be non-negative, got {self.seed}')
        if self.dims is not None and (not self.dims or any(h < 0 for h in self.dims)):
            raise ValidationError(f'--dims must list non-negative dimensions, got {list(self.dims)}')
        if self.test_kind not in TEST_KINDS:
            raise ValidationError(f"--test-kind must be one of {', '.join(TEST_KINDS)}")
        if not self.wasserstein_p >= 1:
            raise ValidationError(f'--p must be >= 1, got {self.wasserstein_p}')

    @classmethod
    def from_sources(cls, command: str, config: Config, args) -> 'RunConfig':
        """Environment defaults from ``config``, overridden by any flag present on ``args``"""
        values = {
            'command': command,
            'metric': config.metric,
            'max_dimension': int(config.max_dim),
            'max_scale': _auto_float(config.max_scale),
            'truncation_cap': _auto_float(config.truncation_cap),
            'alpha': float(config.alpha),
            'permutations': parse_permutations(config.permutations),
            'bootstrap_rounds': int(config.bootstrap_rounds),
            'seed': int(config.seed),
            'output_dir': config.output_dir,
            'grid_resolution': int(config.grid_resolution),
            'frechet_max_iter': int(config.frechet_max_iter),
            'csv_delimiter': config.csv_delimiter,
            'csv_skip_header': config.csv_skip_header,
            'workers': int(config.workers),
        }
        overrides = {
            'inputs': 'inputs', 'metric': 'metric', 'max_dimension': 'max_dim',
            'max_scale': 'max_scale', 'truncation_cap': 'cap', 'alpha': 'alpha',
            'permutations': 'perms', 'bootstrap_rounds': 'boot', 'seed': 'seed',
            'output_dir': 'out', 'grid_resolution': 'grid_resolution', 'dims': 'dims',
            'test_kind': 'test_kind', 'wasserstein_p': 'p', 'workers': 'workers',
        }
        for key, attribute in overrides.items():
            value = getattr(args, attribute, None)
            if value is None:
                continue
            if key in ('max_scale', 'truncation_cap'):
                value = _auto_float(value)
            elif key == 'permutations':
                value = parse_permutations(value)
            elif key in ('inputs', 'dims'):
                value = tuple(value)
            values[key] = value
        values['extra'] = tuple((key, getattr(args, key)) for key in EXTRA_OPTIONS
                                if getattr(args, key, None) is not None)
        return cls(**values)

    @property
    def metric_object(self) -> Metric:
        return Metric.parse(self.metric)

    def option(self, key, default=None):
        """Subcommand-specific flag value"""
        return dict(self.extra).get(key, default)

    def resolved(self, **changes) -> 'RunConfig':
        return replace(self, **changes)

    def with_caps(self, caps: Dict[str, Optional[float]]) -> 'RunConfig':
        """Copy recording the truncation cap used for each summary key (e.g. ``H1``)"""
        return replace(self, resolved_caps=tuple(sorted(caps.items())))

    def to_dict(self) -> dict:
        payload = asdict(self)
        payload['inputs'] = list(self.inputs)
        payload['dims'] = list(self.dims) if self.dims is not None else None
        payload['extra'] = {key: value for key, value in self.extra}
        payload['resolved_caps'] = dict(self.resolved_caps)
        return payload

    def write(self, directory=None) -> str:
        """Echo the config as run_config.json in ``directory`` (default: output_dir)"""
        path = os.path.join(directory or self.output_dir, RUN_CONFIG_FILE)
        write_json(path, self.to_dict())
        return path


def parse_permutations(text):
    """'auto', 'exhaustive' or a positive integer"""
    if isinstance(text, int):
        return text
    text = str(text).strip().lower()
    if text in (AUTO, EXHAUSTIVE):
        return text
    try:
        return int(text)
    except ValueError:
        raise ValidationError(f"--perms expects N, 'auto' or 'exhaustive', got '{text}'") from None


def _auto_float(text):
    if text is None:
        return None
    if isinstance(text, (int, float)):
        return float(text)
    text = str(text).strip().lower()
    if text == AUTO:
        return None
    try:
        return float(text)
    except ValueError:
        raise ValidationError(f"Expected a number or 'auto', got '{text}'") from None
