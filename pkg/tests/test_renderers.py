import json
import math
from unittest import TestCase
from cliffnet.renderers import create_renderer, read_records, TextRenderer
from tests import BaseTestCase


def load_renderer(name):
    class TestRenderer(BaseTestCase):
        renderer = create_renderer(name)

        def parse(self, text):
            records = [json.loads(line) for line in text.splitlines() if line.strip()]
            return self.renderer(records)

    TestRenderer.load_fixtures('renderer_' + name + '.txt')
    globals()['TestRenderer' + name.title()] = TestRenderer


load_renderer('text')
load_renderer('csv')


CHECKS = [
    {'type': 'check', 'suite': 'algebra', 'property': 'gp', 'max_error': 0.0,
     'tolerance': 0.0, 'passed': True, 'cases': 16},
    {'type': 'check', 'suite': 'grad', 'property': 'fd', 'max_error': 3e-06,
     'tolerance': 1e-05, 'passed': True, 'cases': 100},
]
CURVE = [
    {'type': 'curve', 'step': 4, 'train_smse': 0.5, 'valid_smse': None},
    {'type': 'curve', 'step': 8, 'train_smse': 0.25, 'valid_smse': 0.3},
]


class TestCSV(TestCase):
    def test_read_back(self):
        text = create_renderer('csv')(CHECKS + CURVE)
        self.assertEqual(read_records(text), CHECKS + CURVE)

    def test_series(self):
        records = read_records('x,y\n1,2.5\n2,\n')
        self.assertEqual(records, [
            {'type': 'series', 'x': 1, 'y': 2.5},
            {'type': 'series', 'x': 2, 'y': None},
        ])
        self.assertEqual(create_renderer('csv')(records), 'x,y\n1,2.5\n2,\n')


class TestJSON(TestCase):
    def test_sections(self):
        records = CHECKS + [
            {'type': 'metric', 'name': 'onestep', 'value': 0.5},
            {'type': 'metric', 'name': 'rollout', 'value': math.inf},
        ]
        doc = json.loads(create_renderer('json')(records))
        self.assertEqual(doc['metrics'], {'onestep': 0.5, 'rollout': None})
        self.assertEqual(len(doc['checks']), 2)
        self.assertEqual(doc['checks'][1]['max_error'], 3e-06)
        self.assertNotIn('bench', doc)

    def test_stable(self):
        renderer = create_renderer('json')
        self.assertEqual(renderer(CURVE), renderer(list(CURVE)))


class TestSVG(TestCase):
    def test_curve(self):
        svg = create_renderer('svg', title='cfno on advection2d')(CURVE)
        self.assertTrue(svg.lstrip().startswith('<?xml'))
        self.assertIn('<svg', svg)
        self.assertIn('cfno on advection2d', svg)

    def test_checks(self):
        self.assertIn('<svg', create_renderer('svg')(CHECKS))

    def test_empty(self):
        with self.assertRaises(ValueError):
            create_renderer('svg')([])


class TestRegistry(TestCase):
    def test_unknown(self):
        with self.assertRaises(ValueError):
            create_renderer('html')

    def test_register(self):
        renderer = TextRenderer()

        def render_timing(renderer, record):
            return [record['op'], '{:.1f}'.format(record['seconds'])]

        renderer.register('timing', render_timing)
        text = renderer([{'type': 'timing', 'op': 'fft', 'seconds': 1.25}])
        self.assertEqual(text, 'op   seconds\n---  -------\nfft  1.2\n')

    def test_missing_method(self):
        with self.assertRaises(AttributeError):
            TextRenderer()([{'type': 'timing', 'op': 'fft'}])
