import numpy as np
from unittest import TestCase
from numpy.testing import assert_allclose, assert_array_equal
from cliffnet import algebra
from cliffnet.algebra import (
    CL01, CL02, CL20, CL30, Signature, blade_names, build_blade_table, table_product,
    geometric_product, geometric_product_2d, geometric_product_3d, dual,
    quaternion_product, quaternion_rotation_matrix, clifford_kernel_matrix,
)
from cliffnet.errors import SignatureError
from tests import BaseTestCase, parse_multivector, format_multivector

QUATERNION_NAMES = ['1', 'i', 'j', 'k']


def load_products(signature, case_file):
    names = blade_names(signature.n)
    table = build_blade_table(signature)

    class TestProduct(BaseTestCase):
        def parse(self, text):
            a, b = (parse_multivector(s, names) for s in text.split(' * '))
            return format_multivector(geometric_product(a, b, signature), names)

    class TestTableProduct(BaseTestCase):
        def parse(self, text):
            a, b = (parse_multivector(s, names) for s in text.split(' * '))
            return format_multivector(table_product(table, a, b), names)

    TestProduct.load_fixtures(case_file)
    TestTableProduct.load_fixtures(case_file)
    tag = 'cl{}{}'.format(signature.p, signature.q)
    globals()['TestProduct_' + tag] = TestProduct
    globals()['TestTableProduct_' + tag] = TestTableProduct


load_products(CL20, 'gp_cl20.txt')
load_products(CL02, 'gp_cl02.txt')
load_products(CL30, 'gp_cl30.txt')


class TestDual(BaseTestCase):
    @classmethod
    def ignore_case(cls, name):
        return not name.startswith(cls.section)

    def parse(self, text):
        names = blade_names(self.signature.n)
        return format_multivector(dual(parse_multivector(text, names), self.signature), names)


class TestDual2d(TestDual):
    section = 'cl20'
    signature = CL20


class TestDual3d(TestDual):
    section = 'cl30'
    signature = CL30


TestDual2d.load_fixtures('dual.txt')
TestDual3d.load_fixtures('dual.txt')


class TestHamilton(BaseTestCase):
    def parse(self, text):
        a, b = (parse_multivector(s, QUATERNION_NAMES) for s in text.split(' * '))
        return format_multivector(quaternion_product(a, b), QUATERNION_NAMES)


class TestQuaternionIsomorphism(BaseTestCase):
    # 1, i, j, k <-> 1, e1, e2, e12 in Cl(0,2)
    def parse(self, text):
        a, b = (parse_multivector(s, QUATERNION_NAMES) for s in text.split(' * '))
        return format_multivector(geometric_product_2d(a, b, CL02), QUATERNION_NAMES)


class TestRotation(BaseTestCase):
    def parse(self, text):
        q, v = text.strip().split('\n')
        q = parse_multivector(q, QUATERNION_NAMES)
        v = parse_multivector(v, QUATERNION_NAMES)[1:]
        rotated = quaternion_rotation_matrix(q) @ np.array(v)
        return format_multivector([0.0] + list(rotated), QUATERNION_NAMES)


TestHamilton.load_fixtures('quaternion.txt')
TestQuaternionIsomorphism.load_fixtures('quaternion.txt')
TestRotation.load_fixtures('rotation.txt')


class TestSignature(TestCase):
    def test_parse(self):
        self.assertEqual(Signature.parse('2,0'), CL20)
        self.assertEqual(Signature.parse('Cl(3,0)'), CL30)
        self.assertEqual(Signature.parse('02'), CL02)
        self.assertEqual(Signature.parse([0, 1]), CL01)
        self.assertIs(Signature.parse(CL20), CL20)

    def test_blade_count(self):
        self.assertEqual(CL01.blade_count, 2)
        self.assertEqual(CL20.blade_count, 4)
        self.assertEqual(CL30.blade_count, 8)

    def test_blade_names(self):
        self.assertEqual(blade_names(2), ['1', 'e1', 'e2', 'e12'])
        self.assertEqual(blade_names(3), ['1', 'e1', 'e2', 'e3', 'e12', 'e13', 'e23', 'e123'])

    def test_hashable(self):
        self.assertEqual(len({CL20, Signature(2, 0), CL02}), 2)


class TestProducts(TestCase):
    def test_specialized_match_table(self):
        rng = np.random.default_rng(0)
        for signature in (CL20, CL02, CL30):
            table = build_blade_table(signature)
            a = rng.standard_normal((signature.blade_count, 50))
            b = rng.standard_normal((signature.blade_count, 50))
            got = np.stack(geometric_product(list(a), list(b), signature))
            want = np.stack(table_product(table, list(a), list(b)))
            assert_allclose(got, want, atol=1e-12)

    def test_3d_associative(self):
        rng = np.random.default_rng(1)
        a, b, c = rng.standard_normal((3, 8))
        left = geometric_product_3d(geometric_product_3d(a, b), c)
        right = geometric_product_3d(a, geometric_product_3d(b, c))
        assert_allclose(left, right, atol=1e-12)

    def test_complex_numbers(self):
        table = build_blade_table(CL01)
        got = table_product(table, [1.5, -2.0], [0.5, 3.0])
        want = (1.5 - 2.0j) * (0.5 + 3.0j)
        assert_allclose(got, [want.real, want.imag])

    def test_unsupported_signature(self):
        with self.assertRaises(SignatureError):
            geometric_product_2d([1, 0, 0, 0], [1, 0, 0, 0], CL30)
        with self.assertRaises(SignatureError):
            table_product(build_blade_table(CL20), [1, 0], [1, 0])

    def test_kernel_matrix(self):
        w = np.array([0.3, -1.2, 0.7, 2.0])
        f = np.array([1.1, 0.4, -0.6, 0.9])
        k = np.array(clifford_kernel_matrix(list(w), CL20))
        assert_allclose(k @ f, geometric_product_2d(f, w), atol=1e-12)
        assert_array_equal(k[0], [w[0], w[1], w[2], -w[3]])

    def test_reverse_and_grades(self):
        a = [1.0, 2.0, 3.0, 4.0]
        self.assertEqual(algebra.reverse(a, 2), [1.0, 2.0, 3.0, -4.0])
        self.assertEqual(algebra.grade_projection(a, 2, 1), [0.0, 2.0, 3.0, 0.0])

    def test_inner_wedge(self):
        # x y = x . y + x ^ y for vectors
        x, y = (1.5, -0.5), (2.0, 3.0)
        inner, wedge = algebra.vector_inner_wedge(x, y)
        got = geometric_product_2d((0, x[0], x[1], 0), (0, y[0], y[1], 0))
        assert_allclose(got, [inner, 0, 0, wedge])


class TestQuaternionRotation(TestCase):
    def test_orthonormal(self):
        rng = np.random.default_rng(2)
        for q in rng.standard_normal((20, 4)):
            r = quaternion_rotation_matrix(q)
            assert_allclose(r @ r.T, np.eye(3), atol=1e-10)
            self.assertAlmostEqual(np.linalg.det(r), 1.0, places=10)

    def test_zero_without_epsilon(self):
        with self.assertRaises(ValueError):
            quaternion_rotation_matrix([0, 0, 0, 0], epsilon=0.0)

    def test_zero_with_epsilon(self):
        assert_allclose(quaternion_rotation_matrix([0, 0, 0, 0]), np.eye(3))
