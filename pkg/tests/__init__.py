import re
from tests import fixtures
from unittest import TestCase

TERM_PATTERN = re.compile(r'^(-?)(\d*\.?\d*)(e\d+|[ijk])?$')


class BaseTestCase(TestCase):
    @classmethod
    def load_fixtures(cls, case_file):
        def attach_case(n, text, expected):
            def method(self):
                self.assert_case(n, text, expected)

            name = 'test_{}'.format(n)
            method.__name__ = name
            method.__doc__ = 'Run fixture {} - {}'.format(case_file, n)
            setattr(cls, name, method)

        for n, text, expected in fixtures.load_examples(case_file):
            if cls.ignore_case(n):
                continue
            attach_case(n, text, expected)

    @classmethod
    def ignore_case(cls, name):
        return False

    def assert_case(self, name, text, expected):
        result = self.parse(text)
        self.assertEqual(result.strip(), expected.strip())


def parse_multivector(text, names):
    """Coefficients of a sum like ``2 - 3e12 + e1`` over the blades ``names``."""
    text = text.strip()
    if text.startswith('(') and text.endswith(')'):
        text = text[1:-1]
    coefs = [0.0] * len(names)
    for term in text.replace(' ', '').replace('-', '+-').split('+'):
        if not term:
            continue
        m = TERM_PATTERN.match(term)
        if not m:
            raise ValueError('bad term: {!r}'.format(term))
        sign, number, blade = m.groups()
        value = float(number) if number else 1.0
        if sign:
            value = -value
        coefs[names.index(blade or '1')] += value
    return coefs


def format_multivector(coefs, names, digits=9):
    terms = []
    for value, blade in zip(coefs, names):
        value = round(float(value), digits) + 0.0
        if value == 0:
            continue
        if value == int(value):
            value = int(value)
        if blade == '1':
            terms.append(str(value))
        elif value == 1:
            terms.append(blade)
        elif value == -1:
            terms.append('-' + blade)
        else:
            terms.append('{}{}'.format(value, blade))
    if not terms:
        return '0'
    return ' + '.join(terms).replace('+ -', '- ')
