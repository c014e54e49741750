"""
Thread pool helper with schedule-independent results
"""

from concurrent.futures import ThreadPoolExecutor

DEFAULT_WORKERS = 4


def ordered_map(func, items, workers=DEFAULT_WORKERS):
    """
    Apply ``func`` to every item and return results in input order

    Runs inline when ``workers`` <= 1 or there is at most one item.
    """
    items = list(items)
    if workers is None or workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))
