"""
Counter-based random streams

Every random draw in the package is addressed by (seed, stream, index), so a
bootstrap round or permutation produces the same numbers whichever worker
thread runs it.
"""

import numpy as np

# Stream identifiers keep independent consumers of one seed apart.
STREAM_PERMUTATION = 1
STREAM_BOOTSTRAP = 2
STREAM_SAMPLES = 3


def generator(seed, stream, index=0):
    """Philox generator keyed by (seed, stream, index)"""
    if seed < 0:
        raise ValueError(f'Seed must be non-negative, got {seed}')
    key = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, int(stream), int(index)])
    return np.random.Generator(np.random.Philox(key))
