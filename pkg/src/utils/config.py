"""
Configuration module for tda-stats
"""

import os
from dotenv import load_dotenv

AUTO = 'auto'
EXHAUSTIVE = 'exhaustive'


class Config:
    """Application configuration read from the environment / .env file"""

    def __init__(self, env_file='.env'):
        """Initialize configuration from environment file"""
        load_dotenv(env_file)

        # Filtration Settings
        self.metric = os.getenv('TDA_METRIC', 'p2').strip().lower()
        self.max_dim = os.getenv('TDA_MAX_DIM', '2').strip()
        self.max_scale = os.getenv('TDA_MAX_SCALE', AUTO).strip().lower()
        self.truncation_cap = os.getenv('TDA_TRUNCATION_CAP', AUTO).strip().lower()

        # Inference Settings
        self.alpha = os.getenv('TDA_ALPHA', '0.05').strip()
        self.permutations = os.getenv('TDA_PERMUTATIONS', AUTO).strip().lower()
        self.bootstrap_rounds = os.getenv('TDA_BOOTSTRAP_ROUNDS', '200').strip()
        self.seed = os.getenv('TDA_SEED', '0').strip()
        self.frechet_max_iter = os.getenv('TDA_FRECHET_MAX_ITER', '100').strip()

        # Input / Output Settings
        self.output_dir = os.getenv('TDA_OUTPUT_DIR', 'out')
        self.grid_resolution = os.getenv('TDA_GRID_RESOLUTION', '200').strip()
        self.csv_delimiter = os.getenv('TDA_CSV_DELIMITER', ',')
        self.csv_skip_header = os.getenv('TDA_CSV_SKIP_HEADER', 'false').lower() == 'true'

        # Logging Settings
        self.log_level = os.getenv('LOG_LEVEL', 'INFO')
        self.log_file = os.getenv('LOG_FILE', 'logs/tda.log')

        # Performance Settings
        self.workers = os.getenv('TDA_WORKERS', '4').strip()

    def validate(self):
        """Validate configuration, returning a list of error messages"""
        errors = []

        if not _is_int(self.max_dim) or int(self.max_dim) < 0:
            errors.append(f"Invalid TDA_MAX_DIM: {self.max_dim}")

        if self.max_scale != AUTO and not _is_positive_float(self.max_scale):
            errors.append(f"Invalid TDA_MAX_SCALE: {self.max_scale}")

        if self.truncation_cap != AUTO and not _is_positive_float(self.truncation_cap):
            errors.append(f"Invalid TDA_TRUNCATION_CAP: {self.truncation_cap}")

        if not _is_float(self.alpha) or not 0.0 < float(self.alpha) < 1.0:
            errors.append(f"TDA_ALPHA must lie in (0, 1): {self.alpha}")

        if self.permutations not in (AUTO, EXHAUSTIVE) and (
                not _is_int(self.permutations) or int(self.permutations) < 1):
            errors.append(f"Invalid TDA_PERMUTATIONS: {self.permutations}")

        for key, value in (('TDA_BOOTSTRAP_ROUNDS', self.bootstrap_rounds),
                           ('TDA_GRID_RESOLUTION', self.grid_resolution),
                           ('TDA_FRECHET_MAX_ITER', self.frechet_max_iter),
                           ('TDA_WORKERS', self.workers)):
            if not _is_int(value) or int(value) < 1:
                errors.append(f"{key} must be a positive integer: {value}")

        if not _is_int(self.seed) or int(self.seed) < 0:
            errors.append(f"TDA_SEED must be a non-negative integer: {self.seed}")

        if len(self.csv_delimiter) != 1:
            errors.append(f"TDA_CSV_DELIMITER must be one character: {self.csv_delimiter!r}")

        if self.log_level.upper() not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
            errors.append(f"Invalid LOG_LEVEL: {self.log_level}")

        return errors

    def display(self):
        """Display current configuration"""
        print(f"Filtration Configuration:")
        print(f"  Metric: {self.metric}")
        print(f"  Max Dimension: {self.max_dim}")
        print(f"  Max Scale: {self.max_scale}")
        print(f"  Truncation Cap: {self.truncation_cap}")
        print(f"\nInference Configuration:")
        print(f"  Alpha: {self.alpha}")
        print(f"  Permutations: {self.permutations}")
        print(f"  Bootstrap Rounds: {self.bootstrap_rounds}")
        print(f"  Seed: {self.seed}")
        print(f"\nOutput Configuration:")
        print(f"  Output Directory: {self.output_dir}")
        print(f"  Grid Resolution: {self.grid_resolution}")
        print(f"\nLogging Configuration:")
        print(f"  Log Level: {self.log_level}")
        print(f"  Log File: {self.log_file}")
        print(f"\nPerformance Configuration:")
        print(f"  Workers: {self.workers}")


def _is_int(text):
    try:
        int(text)
    except (TypeError, ValueError):
        return False
    return True


def _is_float(text):
    try:
        value = float(text)
    except (TypeError, ValueError):
        return False
    return value == value and value not in (float('inf'), float('-inf'))


def _is_positive_float(text):
    return _is_float(text) and float(text) > 0.0
