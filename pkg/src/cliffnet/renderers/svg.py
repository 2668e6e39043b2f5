"""
    cliffnet.renderers.svg
    ~~~~~~~~~~~~~~~~~~~~~~

    Figures through matplotlib's Agg canvas, written as SVG text.

    - ``curve`` records: train / valid SMSE against the step, log scale;
    - ``bench`` records: median time per op and size with p10-p90 bars;
    - ``check`` records: max error over tolerance per property;
    - ``metric`` records: one bar per metric;
    - ``series`` records: first column against the others.
"""

import io
import math
from typing import Any, Dict, List
from matplotlib.figure import Figure
from matplotlib.backends.backend_agg import FigureCanvasAgg
from ._base import BaseRenderer, group_by_type

GOLDEN_RATIO = (math.sqrt(5) - 1.0) / 2.0


def _finite(values):
    return [v if v is not None and math.isfinite(v) else float('nan') for v in values]


class SVGRenderer(BaseRenderer):
    NAME = 'svg'

    def __init__(self, width=8.0, title=None):
        super(SVGRenderer, self).__init__()
        self.width = width
        self.title = title

    def __call__(self, records):
        groups = group_by_type(records)
        if not groups:
            raise ValueError('nothing to plot')
        fig = Figure(figsize=(self.width, self.width * GOLDEN_RATIO * len(groups)))
        FigureCanvasAgg(fig)
        for k, (kind, group) in enumerate(groups):
            ax = fig.add_subplot(len(groups), 1, k + 1)
            self._get_method(kind)(ax, group)
        if self.title:
            fig.suptitle(self.title)
        fig.tight_layout()
        buf = io.StringIO()
        fig.savefig(buf, format='svg')
        return buf.getvalue()

    def curve(self, ax, records: List[Dict[str, Any]]):
        steps = [r['step'] for r in records]
        ax.plot(steps, _finite([r['train_smse'] for r in records]), marker='o', label='train')
        valid = [r.get('valid_smse') for r in records]
        if any(v is not None for v in valid):
            ax.plot(steps, _finite(valid), marker='s', label='valid')
        ax.set_yscale('log')
        ax.set_xlabel('step')
        ax.set_ylabel('SMSE')
        ax.legend()

    def bench(self, ax, records: List[Dict[str, Any]]):
        labels = ['{} {}'.format(r['op'], r['size']) for r in records]
        median = [r['median'] for r in records]
        lower = [r['median'] - r['p10'] for r in records]
        upper = [r['p90'] - r['median'] for r in records]
        ax.bar(range(len(records)), median, yerr=[lower, upper], capsize=3)
        ax.set_xticks(range(len(records)))
        ax.set_xticklabels(labels, rotation=45, ha='right')
        ax.set_ylabel('seconds')

    def check(self, ax, records: List[Dict[str, Any]]):
        ratio = [r['max_error'] / r['tolerance'] if r['tolerance'] > 0 else float(r['max_error'] > 0)
                 for r in records]
        colors = ['tab:green' if r['passed'] else 'tab:red' for r in records]
        ax.bar(range(len(records)), _finite(ratio), color=colors)
        ax.axhline(1.0, color='k', linewidth=0.8)
        ax.set_xticks(range(len(records)))
        ax.set_xticklabels([r['property'] for r in records], rotation=90)
        ax.set_ylabel('max error / tolerance')

    def metric(self, ax, records: List[Dict[str, Any]]):
        ax.bar([r['name'] for r in records], _finite([r['value'] for r in records]))
        ax.set_ylabel('SMSE')

    def series(self, ax, records: List[Dict[str, Any]]):
        keys = [k for k in records[0] if k != 'type']
        x = [r[keys[0]] for r in records]
        for key in keys[1:]:
            ax.plot(x, _finite([r[key] for r in records]), marker='.', label=key)
        ax.set_xlabel(keys[0])
        if len(keys) > 2:
            ax.legend()
