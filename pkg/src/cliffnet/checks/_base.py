import math
import numpy as np
from ..fields import MultivectorField


def check_record(suite, name, errors, tolerance, cases):
    """One row of a suite report.

    ``errors`` are the per-case errors; a non-finite error never passes.
    """
    errors = np.atleast_1d(np.asarray(errors, dtype=np.float64))
    max_error = float(np.max(errors)) if errors.size else 0.0
    if not np.all(np.isfinite(errors)):
        max_error = math.inf
    return {
        'type': 'check',
        'suite': suite,
        'property': name,
        'max_error': max_error,
        'tolerance': float(tolerance),
        'passed': bool(max_error <= tolerance),
        'cases': int(cases),
    }


def scaled(count, scale):
    return max(1, int(round(count * scale)))


def rel_error(actual, expected):
    """Largest absolute deviation relative to the size of ``expected``
    (never below 1)."""
    actual = np.asarray(actual)
    expected = np.asarray(expected)
    scale = max(1.0, float(np.max(np.abs(expected))) if expected.size else 1.0)
    return float(np.max(np.abs(actual - expected))) / scale


def random_field(rng, signature, channels, shape):
    data = rng.standard_normal((signature.blade_count, channels) + tuple(shape))
    return MultivectorField(signature, data)
