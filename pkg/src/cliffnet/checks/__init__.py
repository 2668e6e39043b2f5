"""
    cliffnet.checks
    ~~~~~~~~~~~~~~~

    Property suites run by ``python -m cliffnet check``. A suite is a
    function ``suite(seed=0, scale=1.0)`` returning check records; see
    :func:`cliffnet.checks._base.check_record`.
"""

import logging
from importlib import import_module

__all__ = ['SUITES', 'import_suite', 'run_checks', 'failures']

log = logging.getLogger(__name__)

_suites = {
    'algebra': 'cliffnet.checks.algebra.algebra_suite',
    'transforms': 'cliffnet.checks.transforms.transforms_suite',
    'layers': 'cliffnet.checks.layers.layers_suite',
    'grad': 'cliffnet.checks.grad.grad_suite',
}
_cached_modules = {}

SUITES = tuple(_suites)


def import_suite(name):
    if name in _cached_modules:
        return _cached_modules[name]

    if callable(name):
        return name

    if name in _suites:
        module_path, func_name = _suites[name].rsplit('.', 1)
    elif '.' in name:
        module_path, func_name = name.rsplit('.', 1)
    else:
        raise ValueError('unknown check suite: {!r}'.format(name))

    module = import_module(module_path)
    suite = getattr(module, func_name)
    _cached_modules[name] = suite
    return suite


def run_checks(names=('all',), seed=0, scale=1.0):
    """Run the named suites (``'all'`` expands to every suite) in order."""
    if isinstance(names, str):
        names = [names]
    expanded = []
    for name in names:
        for n in (SUITES if name == 'all' else [name]):
            if n not in expanded:
                expanded.append(n)

    records = []
    for name in expanded:
        suite = import_suite(name)
        log.info('running suite %s', name)
        result = suite(seed=seed, scale=scale)
        for r in result:
            level = logging.DEBUG if r['passed'] else logging.WARNING
            log.log(level, '%s.%s: max error %.3g (tolerance %.3g)',
                    r['suite'], r['property'], r['max_error'], r['tolerance'])
        records.extend(result)
    return records


def failures(records):
    return [r for r in records if not r['passed']]
