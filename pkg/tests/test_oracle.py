import numpy as np
from unittest import TestCase
from numpy.testing import assert_allclose
from scipy import ndimage, linalg
from cliffnet import oracle
from cliffnet.algebra import CL20, CL30
from cliffnet.fields import MultivectorField
from cliffnet.transforms import clifford_ft_2d, clifford_ft_3d


class TestSymbolic(TestCase):
    def test_blades(self):
        self.assertEqual(oracle.oracle_blades(2), ['', '1', '2', '12'])
        self.assertEqual(len(oracle.oracle_blades(3)), 8)

    def test_products(self):
        rows = {(i, j): (r, s) for i, j, r, s in oracle.symbolic_blade_product((2, 0))}
        self.assertEqual(rows[(2, 1)], (3, -1))
        self.assertEqual(rows[(3, 3)], (0, -1))
        rows = {(i, j): (r, s) for i, j, r, s in oracle.symbolic_blade_product((0, 2))}
        self.assertEqual(rows[(1, 1)], (0, -1))

    def test_gp(self):
        # (1 + e1)(1 + e1) = 2 + 2 e1
        self.assertEqual(oracle.oracle_gp((2, 0), [1, 1, 0, 0], [1, 1, 0, 0]), [2, 2, 0, 0])


class TestDFT(TestCase):
    def test_matches_fft(self):
        rng = np.random.default_rng(0)
        g = rng.standard_normal((4, 6)) + 1j * rng.standard_normal((4, 6))
        assert_allclose(oracle.oracle_dft(g), np.fft.fftn(g), atol=1e-10)
        assert_allclose(oracle.oracle_dft(g, inverse=True), np.fft.ifftn(g), atol=1e-10)

    def test_clifford_ft(self):
        rng = np.random.default_rng(1)
        f = rng.standard_normal((4, 4, 4))
        got = clifford_ft_2d(MultivectorField(CL20, f[:, np.newaxis])).data[:, 0]
        assert_allclose(got, oracle.oracle_clifford_ft((2, 0), f), atol=1e-10)
        f = rng.standard_normal((8, 3, 3, 3))
        got = clifford_ft_3d(MultivectorField(CL30, f[:, np.newaxis])).data[:, 0]
        assert_allclose(got, oracle.oracle_clifford_ft((3, 0), f), atol=1e-10)


class TestConv(TestCase):
    def test_scalar_kernel_is_correlation(self):
        rng = np.random.default_rng(2)
        f = rng.standard_normal((4, 1, 6, 6))
        kernel = np.zeros((4, 1, 1, 3, 3))
        kernel[0, 0, 0] = rng.standard_normal((3, 3))
        out = oracle.oracle_conv((2, 0), f, kernel)
        for b in range(4):
            want = ndimage.correlate(f[b, 0], kernel[0, 0, 0], mode='wrap')
            assert_allclose(out[b, 0], want, atol=1e-12)

    def test_zero_padding(self):
        f = np.ones((4, 1, 3, 3))
        kernel = np.zeros((4, 1, 1, 3, 3))
        kernel[0] = 1.0
        out = oracle.oracle_conv((2, 0), f, kernel, padding='zero')
        self.assertEqual(out[0, 0, 1, 1], 9.0)
        self.assertEqual(out[0, 0, 0, 0], 4.0)

    def test_stride(self):
        f = np.ones((4, 1, 5, 5))
        kernel = np.zeros((4, 1, 1, 1, 1))
        kernel[0] = 1.0
        self.assertEqual(oracle.oracle_conv((2, 0), f, kernel, stride=2).shape, (4, 1, 3, 3))


class TestQuaternion(TestCase):
    def test_unit_rules(self):
        self.assertEqual(oracle.oracle_quaternion_product([0, 1, 0, 0], [0, 0, 1, 0]), [0, 0, 0, 1])

    def test_rotate(self):
        c = np.cos(np.pi / 4)
        got = oracle.oracle_quaternion_rotate([c, 0, 0, c], [1.0, 0.0, 0.0])
        assert_allclose(got, [0, 1, 0], atol=1e-12)


class TestInvSqrtm(TestCase):
    def test_matches_scipy(self):
        rng = np.random.default_rng(3)
        a = rng.standard_normal((4, 4))
        c = a @ a.T + np.eye(4)
        want = linalg.inv(linalg.sqrtm(c))
        assert_allclose(oracle.oracle_inv_sqrtm(c), want, atol=1e-10)
