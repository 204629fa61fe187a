import logging
import os
from concurrent.futures import ThreadPoolExecutor

logger = logging.getLogger(__name__)

THREADS_VARIABLE = 'HGFLOW_THREADS'


def thread_count():
    """
    Worker cap taken from HGFLOW_THREADS, falling back to the cpu count when it is
    absent or not a positive integer.
    """
    value = os.getenv(THREADS_VARIABLE)
    if value is not None:
        try:
            count = int(value)
            if count >= 1:
                return count
        except ValueError:
            pass

        logger.debug('Ignoring invalid %s=%r', THREADS_VARIABLE, value)

    return os.cpu_count() or 1


def ordered_map(function, items):
    """
    Map function over items, returning a list in input order. Runs sequentially
    when a single worker is allowed or there is at most one item.

    >>> ordered_map(abs, [-1, 2, -3])
    [1, 2, 3]
    """
    items = list(items)
    workers = min(thread_count(), len(items))
    if workers <= 1:
        return [function(item) for item in items]

    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(function, items))
