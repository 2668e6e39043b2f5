from ._base import COLUMNS, BaseRenderer
from .text import TextRenderer
from .csv import CSVRenderer, read_records
from .json import JSONRenderer
from .svg import SVGRenderer

_renderers = {
    'text': TextRenderer,
    'csv': CSVRenderer,
    'json': JSONRenderer,
    'svg': SVGRenderer,
}


def create_renderer(name, **kwargs):
    try:
        return _renderers[name](**kwargs)
    except KeyError:
        raise ValueError('unknown renderer: {!r}'.format(name))


__all__ = [
    'COLUMNS', 'BaseRenderer', 'TextRenderer', 'CSVRenderer', 'JSONRenderer',
    'SVGRenderer', 'create_renderer', 'read_records',
]
