import os
import hashlib
from concurrent.futures import ThreadPoolExecutor

THREADS_ENV = 'CLIFFORD_THREADS'


def resolve_threads(threads=None):
    """Worker count from the argument, else ``$CLIFFORD_THREADS``, else 1."""
    if threads is None:
        value = os.environ.get(THREADS_ENV)
        if not value:
            return 1
        try:
            threads = int(value)
        except ValueError:
            raise ValueError('{} must be an integer, got {!r}'.format(THREADS_ENV, value))
    threads = int(threads)
    if threads < 1:
        raise ValueError('thread count must be at least 1')
    return threads


def parallel_map(func, items, threads=1):
    """``[func(x) for x in items]`` on a pool of ``threads`` workers.

    Results keep the order of ``items``.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


def sha256_file(path, chunk=1 << 20):
    h = hashlib.sha256()
    with open(path, 'rb') as f:
        while True:
            data = f.read(chunk)
            if not data:
                break
            h.update(data)
    return h.hexdigest()


def sha256_bytes(data):
    return hashlib.sha256(data).hexdigest()
