import json
import math
from typing import Any, Dict
from ._base import BaseRenderer, columns_of

#: top-level key of every record type
SECTIONS = {'check': 'checks', 'bench': 'bench', 'curve': 'curve', 'series': 'series'}


def _value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


class JSONRenderer(BaseRenderer):
    """A JSON document::

        {
          "metrics": {"onestep": 0.012, "rollout": 0.05, ...},
          "checks": [{"suite": ..., "property": ..., "max_error": ..., ...}],
          "bench": [...],
          "curve": [...]
        }

    Only sections with records are present; non-finite numbers become
    ``null``. Keys are sorted so equal inputs give equal text.
    """
    NAME = 'json'

    def __init__(self, indent=2):
        super(JSONRenderer, self).__init__()
        self.indent = indent

    def __call__(self, records):
        doc = {}
        for record, rendered in zip(records, self.iter_records(records)):
            if record['type'] == 'metric':
                doc.setdefault('metrics', {}).update(rendered)
            else:
                key = SECTIONS.get(record['type'], record['type'])
                doc.setdefault(key, []).append(rendered)
        return json.dumps(doc, indent=self.indent, sort_keys=True) + '\n'

    def _row(self, record: Dict[str, Any]):
        return {c: _value(record.get(c)) for c in columns_of(record)}

    def check(self, record: Dict[str, Any]):
        return self._row(record)

    def metric(self, record: Dict[str, Any]):
        return {record['name']: _value(record['value'])}

    def bench(self, record: Dict[str, Any]):
        return self._row(record)

    def curve(self, record: Dict[str, Any]):
        return self._row(record)

    def series(self, record: Dict[str, Any]):
        return self._row(record)
