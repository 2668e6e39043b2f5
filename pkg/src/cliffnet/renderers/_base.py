from typing import Any, Dict, Iterable

#: columns of each record type, in output order
COLUMNS = {
    'check': ('suite', 'property', 'max_error', 'tolerance', 'passed', 'cases'),
    'metric': ('name', 'value'),
    'bench': ('op', 'size', 'reps', 'median', 'p10', 'p90'),
    'curve': ('step', 'train_smse', 'valid_smse'),
}


class BaseRenderer(object):
    """Turn records (dicts with a ``type`` key) into an output document.

    A renderer has one method per record type; more can be added with
    :meth:`register`.
    """
    NAME = 'base'

    def __init__(self):
        self.__methods = {}

    def register(self, name, method):
        """Register a render method for the named record type. For example::

            def render_timing(renderer, record):
                return [record['op'], record['seconds']]

            renderer.register('timing', render_timing)
        """
        # bind self into renderer method
        self.__methods[name] = lambda *arg, **kwargs: method(self, *arg, **kwargs)

    def _get_method(self, name):
        try:
            return object.__getattribute__(self, name)
        except AttributeError:
            method = self.__methods.get(name)
            if not method:
                raise AttributeError('No renderer "{!r}"'.format(name))
            return method

    def render_record(self, record: Dict[str, Any]):
        func = self._get_method(record['type'])
        return func(record)

    def iter_records(self, records: Iterable[Dict[str, Any]]):
        for record in records:
            yield self.render_record(record)

    def __call__(self, records):
        raise NotImplementedError()


def columns_of(record):
    kind = record['type']
    if kind in COLUMNS:
        return COLUMNS[kind]
    return tuple(k for k in record if k != 'type')


def group_by_type(records):
    """Split records into runs of the same type, keeping their order."""
    groups = []
    for record in records:
        if groups and groups[-1][0] == record['type']:
            groups[-1][1].append(record)
        else:
            groups.append((record['type'], [record]))
    return groups
