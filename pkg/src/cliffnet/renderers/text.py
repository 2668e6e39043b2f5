from typing import Any, Dict
from ._base import BaseRenderer, columns_of, group_by_type


def _format(value):
    if value is None:
        return '-'
    if isinstance(value, bool):
        return 'ok' if value else 'FAIL'
    if isinstance(value, float):
        return '{:.3e}'.format(value)
    return str(value)


class TextRenderer(BaseRenderer):
    """Aligned plain-text tables, one per run of records of a type."""
    NAME = 'text'

    def __call__(self, records):
        blocks = []
        for _, group in group_by_type(records):
            header = list(columns_of(group[0]))
            rows = [header] + list(self.iter_records(group))
            widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
            lines = ['  '.join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
            lines.insert(1, '  '.join('-' * w for w in widths))
            blocks.append('\n'.join(lines))
        return '\n\n'.join(blocks) + '\n' if blocks else ''

    def _row(self, record: Dict[str, Any]):
        return [_format(record.get(c)) for c in columns_of(record)]

    def check(self, record: Dict[str, Any]):
        return self._row(record)

    def metric(self, record: Dict[str, Any]):
        return self._row(record)

    def bench(self, record: Dict[str, Any]):
        return self._row(record)

    def curve(self, record: Dict[str, Any]):
        return self._row(record)

    def series(self, record: Dict[str, Any]):
        return self._row(record)
