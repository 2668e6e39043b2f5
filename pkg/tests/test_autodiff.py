import numpy as np
from unittest import TestCase
from numpy.testing import assert_allclose
from scipy.special import erf
from cliffnet import autodiff as ad
from cliffnet.errors import ShapeError


def fd_ok(testcase, closure, params, tolerance=1e-5, samples=40):
    report = ad.fd_check(closure, params, samples=samples)
    testcase.assertLessEqual(report['max_rel_error'], tolerance, report['worst'])
    return report


class TestArithmetic(TestCase):
    def test_square(self):
        x = ad.Parameter([1.0, -2.0, 3.0])
        g, = ad.grad((x * x).sum(), [x])
        assert_allclose(g, [2.0, -4.0, 6.0])

    def test_broadcast(self):
        x = ad.Parameter(np.ones((3, 4)))
        b = ad.Parameter(np.ones(4))
        gx, gb = ad.grad((x + b).sum(), [x, b])
        assert_allclose(gx, np.ones((3, 4)))
        assert_allclose(gb, np.full(4, 3.0))

    def test_division(self):
        x = ad.Parameter([2.0, 4.0])
        g, = ad.grad((1.0 / x).sum(), [x])
        assert_allclose(g, [-0.25, -1.0 / 16])

    def test_shared_input(self):
        x = ad.Parameter(3.0)
        g, = ad.grad(x * x + x, [x])
        assert_allclose(g, 7.0)

    def test_indexing_and_mean(self):
        rng = np.random.default_rng(0)
        x = ad.Parameter(rng.standard_normal((4, 5)))
        fd_ok(self, lambda: (x[1:3] * x[1:3]).mean() + x.transpose(1, 0).reshape(-1)[2], [x])


class TestPrimitives(TestCase):
    def test_einsum(self):
        rng = np.random.default_rng(1)
        a = ad.Parameter(rng.standard_normal((3, 4)))
        b = ad.Parameter(rng.standard_normal((4, 5)))
        out = ad.einsum('ij,jk->ik', a, b)
        assert_allclose(out.value, a.value @ b.value)
        ga, gb = ad.grad(out.sum(), [a, b])
        assert_allclose(ga, np.ones((3, 5)) @ b.value.T)
        assert_allclose(gb, a.value.T @ np.ones((3, 5)))

    def test_stack_concatenate(self):
        rng = np.random.default_rng(2)
        a = ad.Parameter(rng.standard_normal((2, 3)))
        b = ad.Parameter(rng.standard_normal((2, 3)))
        p1 = rng.standard_normal((2, 2, 3))
        p2 = rng.standard_normal((4, 3))
        fd_ok(self, lambda: (ad.stack([a, b * b], axis=1) * p1).sum()
              + (ad.concatenate([a, b], axis=0) * p2).sum(), [a, b])

    def test_take_embed(self):
        rng = np.random.default_rng(3)
        x = ad.Parameter(rng.standard_normal((5, 3)))
        taken = ad.take(x, [0, 2, 4], axis=0)
        self.assertEqual(taken.shape, (3, 3))
        full = ad.embed(taken, [0, 2, 4], axis=0, size=5)
        assert_allclose(full.value[1], 0.0)
        assert_allclose(full.value[2], x.value[2])
        fd_ok(self, lambda: (ad.embed(ad.take(x, [0, 2, 4], 0), [0, 2, 4], 0, 5) * x).sum(), [x])

    def test_conv_matches_loops(self):
        rng = np.random.default_rng(4)
        x = rng.standard_normal((1, 2, 5, 5))
        w = rng.standard_normal((3, 2, 3, 3))
        out = ad.conv(x, w).value
        want = np.zeros((1, 3, 5, 5))
        for o in range(3):
            for i in range(5):
                for j in range(5):
                    for u in range(3):
                        for v in range(3):
                            want[0, o, i, j] += np.dot(w[o, :, u, v], x[0, :, (i + u - 1) % 5, (j + v - 1) % 5])
        assert_allclose(out, want, atol=1e-12)

    def test_conv_grad(self):
        rng = np.random.default_rng(5)
        x = ad.Parameter(rng.standard_normal((2, 2, 6, 6)))
        w = ad.Parameter(rng.standard_normal((3, 2, 3, 3)))
        proj = rng.standard_normal((2, 3, 3, 3))
        fd_ok(self, lambda: (ad.conv(x, w, padding='zero', stride=2) * proj).sum(), [x, w])

    def test_conv_errors(self):
        with self.assertRaises(ShapeError):
            ad.conv(np.zeros((1, 2, 4, 4)), np.zeros((1, 2, 2, 2)))
        with self.assertRaises(ShapeError):
            ad.conv(np.zeros((1, 2, 4, 4)), np.zeros((1, 3, 3, 3)))
        with self.assertRaises(ShapeError):
            ad.conv(np.zeros((1, 1, 2, 2)), np.zeros((1, 1, 3, 3)))

    def test_dft(self):
        rng = np.random.default_rng(6)
        x = ad.Parameter(rng.standard_normal((2, 3, 4, 4)))
        out = ad.dft(x, (-2, -1)).value
        z = np.fft.fft2(x.value[0] + 1j * x.value[1])
        assert_allclose(out[0] + 1j * out[1], z, atol=1e-12)
        proj = rng.standard_normal(x.shape)
        fd_ok(self, lambda: (ad.dft(x, (-2, -1)) * proj).sum(), [x])
        fd_ok(self, lambda: (ad.dft(x, (-2, -1), inverse=True) * proj).sum(), [x])
        with self.assertRaises(ShapeError):
            ad.dft(x, (1, 2))

    def test_gelu(self):
        x = np.linspace(-3, 3, 13)
        assert_allclose(ad.gelu(x).value, 0.5 * x * (1 + erf(x / np.sqrt(2))))
        self.assertEqual(float(ad.gelu(0.0).value), 0.0)
        p = ad.Parameter(x)
        fd_ok(self, lambda: (ad.gelu(p) * p).sum(), [p])

    def test_inv_sqrtm(self):
        rng = np.random.default_rng(7)
        a = rng.standard_normal((2, 3, 3))
        c = np.einsum('bij,bkj->bik', a, a) + np.eye(3)
        w = ad.inv_sqrtm(c).value
        for k in range(2):
            assert_allclose(w[k] @ c[k] @ w[k], np.eye(3), atol=1e-10)
        with self.assertRaises(ShapeError):
            ad.inv_sqrtm(np.zeros((3, 2)))


class TestTape(TestCase):
    def test_no_grad(self):
        x = ad.Parameter([1.0, 2.0])
        with ad.no_grad():
            y = x * x
        self.assertIsNone(y.node)
        self.assertFalse(y.requires_grad)
        self.assertIsNotNone((x * x).node)

    def test_replay(self):
        x = ad.Parameter([1.0, 2.0])
        loss = (ad.gelu(x) * x).sum()
        tape = ad.Tape(loss)
        self.assertIn('gelu', tape.ops())
        x.value[:] = [3.0, 4.0]
        want = float((ad.gelu(np.array([3.0, 4.0])).value * [3.0, 4.0]).sum())
        self.assertAlmostEqual(float(tape.replay()), want)

    def test_scalar_loss(self):
        x = ad.Parameter([1.0, 2.0])
        with self.assertRaises(ShapeError):
            ad.grad(x * x, [x])

    def test_disconnected(self):
        x = ad.Parameter([1.0])
        unused = ad.Parameter([5.0], name='unused')
        with self.assertWarns(ad.DisconnectedWarning):
            grads = ad.grad((x * x).sum(), [x, unused])
        self.assertEqual(grads.disconnected, [1])
        assert_allclose(grads[1], 0.0)

    def test_fd_report(self):
        x = ad.Parameter(np.arange(6.0))
        report = ad.fd_check(lambda: (x * x).sum(), [x], samples=10)
        self.assertEqual(report['checked'], 6)
        self.assertLess(report['max_abs_error'], 1e-6)
