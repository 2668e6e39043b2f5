"""Wall-clock timings of the core kernels."""

import logging
import time
import numpy as np
from . import autodiff as ad
from .algebra import CL20, CL30, geometric_product_2d, geometric_product_3d
from .layers import clifford_conv, clifford_spectral, init_clifford, init_spectral

__all__ = ['BENCH_OPS', 'timings', 'bench']

log = logging.getLogger(__name__)

#: channels of the layer benchmarks
CHANNELS = 8


def _gp2d(size, rng):
    a = list(rng.standard_normal((4, size, size)))
    b = list(rng.standard_normal((4, size, size)))
    return lambda: geometric_product_2d(a, b, CL20)


def _gp3d(size, rng):
    a = list(rng.standard_normal((8, size, size, size)))
    b = list(rng.standard_normal((8, size, size, size)))
    return lambda: geometric_product_3d(a, b)


def _conv2d(size, rng):
    x = rng.standard_normal((1, 4, CHANNELS, size, size))
    w = init_clifford(CHANNELS, CHANNELS, (3, 3), CL20, seed=rng).weights

    def run():
        with ad.no_grad():
            return clifford_conv(x, w, CL20)
    return run


def _spectral2d(size, rng):
    x = rng.standard_normal((1, 4, CHANNELS, size, size))
    modes = max(1, size // 4)
    w = init_spectral(CHANNELS, CHANNELS, (modes, modes), CL20, rng).weights

    def run():
        with ad.no_grad():
            return clifford_spectral(x, w, CL20)
    return run


BENCH_OPS = {
    'gp2d': _gp2d,
    'gp3d': _gp3d,
    'conv2d': _conv2d,
    'spectral2d': _spectral2d,
}


def timings(func, reps):
    out = []
    for _ in range(reps):
        start = time.perf_counter()
        func()
        out.append(time.perf_counter() - start)
    return np.array(out)


def bench(op, sizes=(16, 32), reps=10, seed=0):
    """One ``bench`` record per size with the median, p10 and p90 seconds."""
    if op not in BENCH_OPS:
        raise ValueError('unknown bench op: {!r}'.format(op))
    if reps < 1:
        raise ValueError('reps must be positive')
    rng = np.random.default_rng(seed)
    records = []
    for size in sizes:
        func = BENCH_OPS[op](int(size), rng)
        func()
        t = timings(func, reps)
        p10, median, p90 = np.percentile(t, [10, 50, 90])
        log.info('%s size %d: median %.3g s over %d reps', op, size, median, reps)
        records.append({
            'type': 'bench', 'op': op, 'size': int(size), 'reps': int(reps),
            'median': float(median), 'p10': float(p10), 'p90': float(p90),
        })
    return records
