import io
import csv
from typing import Any, Dict
from ._base import COLUMNS, BaseRenderer, columns_of, group_by_type


def _cell(value):
    if value is None:
        return ''
    if isinstance(value, float):
        return repr(value)
    return str(value)


class CSVRenderer(BaseRenderer):
    """Comma separated values with a header row per record type.

    Floats are written with ``repr`` so they read back exactly; a missing
    value is an empty cell.
    """
    NAME = 'csv'

    def __call__(self, records):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator='\n')
        for _, group in group_by_type(records):
            writer.writerow(columns_of(group[0]))
            writer.writerows(self.iter_records(group))
        return buf.getvalue()

    def _row(self, record: Dict[str, Any]):
        return [_cell(record.get(c)) for c in columns_of(record)]

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


def _parse(value):
    if value == '':
        return None
    if value in ('True', 'False'):
        return value == 'True'
    for cast in (int, float):
        try:
            return cast(value)
        except ValueError:
            pass
    return value


def read_records(text):
    """Parse CSV text back into records.

    The record type comes from the header; an unknown header of two or
    more columns gives ``series`` records.
    """
    by_header = {cols: kind for kind, cols in COLUMNS.items()}
    records = []
    header = None
    for row in csv.reader(io.StringIO(text)):
        if not row:
            header = None
            continue
        if header is None or tuple(row) in by_header:
            header = tuple(row)
            continue
        kind = by_header.get(header, 'series')
        record = {'type': kind}
        record.update({k: _parse(v) for k, v in zip(header, row)})
        records.append(record)
    return records
