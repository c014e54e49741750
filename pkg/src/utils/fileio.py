"""
Atomic file output
"""

import json
import os
import tempfile
from contextlib import contextmanager


@contextmanager
def atomic_write(path, mode='w', encoding='utf-8', newline=None):
    """
    Open a temporary file next to ``path`` and rename it into place on success

    Args:
        path: Final output path
        mode: 'w' for text or 'wb' for bytes
        encoding: Text encoding (ignored for binary mode)
        newline: Passed through to open() for text mode

    Yields:
        Writable file object
    """
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, temp_path = tempfile.mkstemp(dir=directory, prefix='.tmp-', suffix=os.path.basename(path))
    try:
        if 'b' in mode:
            handle = os.fdopen(fd, mode)
        else:
            handle = os.fdopen(fd, mode, encoding=encoding, newline=newline)
        with handle:
            yield handle
        os.replace(temp_path, path)
    except BaseException:
        try:
            os.unlink(temp_path)
        except FileNotFoundError:
            pass
        raise


def write_json(path, payload):
    """Write ``payload`` as sorted, indented JSON, atomically"""
    with atomic_write(path) as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write('\n')


def format_float(value):
    """Shortest round-trip decimal text for a float, 'inf' for infinity"""
    value = float(value)
    if value == float('inf'):
        return 'inf'
    return repr(value)
