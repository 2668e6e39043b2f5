import numpy as np
from unittest import TestCase
from numpy.testing import assert_array_equal
from cliffnet.algebra import CL20, CL30
from cliffnet.fields import (
    MultivectorField, FieldPacking, ADVECTION_PACKING, MAXWELL_PACKING,
    pack, unpack, circular_shift, pad_periodic, zero_pad,
)
from cliffnet.errors import SignatureError, ShapeError, PackingError, NumericalError


class TestMultivectorField(TestCase):
    def test_layout(self):
        field = MultivectorField.zeros(CL20, 3, (8, 6))
        self.assertEqual(field.blades, 4)
        self.assertEqual(field.channels, 3)
        self.assertEqual(field.spatial_shape, (8, 6))
        self.assertEqual(field.spatial_ndim, 2)
        self.assertEqual(field.spacing, (1.0, 1.0))

    def test_blade_by_name(self):
        data = np.arange(8 * 2 * 2 * 2, dtype=float).reshape(8, 1, 2, 2, 2)
        field = MultivectorField(CL30, data)
        assert_array_equal(field.blade('e13'), data[5])
        assert_array_equal(field.blade(7), data[7])

    def test_read_only(self):
        field = MultivectorField.zeros(CL20, 1, (4, 4))
        with self.assertRaises(ValueError):
            field.data[0, 0, 0, 0] = 1.0

    def test_wrong_blade_count(self):
        with self.assertRaises(SignatureError):
            MultivectorField(CL30, np.zeros((4, 1, 4, 4, 4)))

    def test_wrong_rank(self):
        with self.assertRaises(ShapeError):
            MultivectorField(CL20, np.zeros((4, 1, 4)))
        with self.assertRaises(ShapeError):
            MultivectorField(CL20, np.zeros((4, 1, 4, 4)), spacing=(1.0,))

    def test_non_finite(self):
        data = np.zeros((4, 1, 4, 4))
        data[2, 0, 1, 1] = np.nan
        with self.assertRaises(NumericalError):
            MultivectorField(CL20, data)

    def test_arithmetic(self):
        rng = np.random.default_rng(0)
        a = MultivectorField(CL20, rng.standard_normal((4, 2, 4, 4)))
        b = MultivectorField(CL20, rng.standard_normal((4, 2, 4, 4)))
        assert_array_equal((a + b).data, a.data + b.data)
        assert_array_equal((a - b).data, a.data - b.data)
        assert_array_equal((2.0 * a).data, 2.0 * a.data)
        assert_array_equal((-a).data, -a.data)

    def test_arithmetic_mismatch(self):
        a = MultivectorField.zeros(CL20, 1, (4, 4))
        with self.assertRaises(ShapeError):
            a + MultivectorField.zeros(CL20, 2, (4, 4))


class TestPacking(TestCase):
    def test_advection_roundtrip(self):
        rng = np.random.default_rng(1)
        grids = {name: rng.standard_normal((8, 8)) for name in ADVECTION_PACKING.names()}
        field = pack(grids, ADVECTION_PACKING, CL20)
        self.assertEqual(field.data.shape, (4, 1, 8, 8))
        # the bivector slot carries no field
        assert_array_equal(field.data[3], 0.0)
        back = unpack(field, ADVECTION_PACKING)
        for name, grid in grids.items():
            assert_array_equal(back[name], grid)

    def test_maxwell_orientation(self):
        grids = {name: np.full((2, 2, 2), 1.0) for name in MAXWELL_PACKING.names()}
        field = pack(grids, MAXWELL_PACKING, CL30)
        # magnetic_y is stored on e3e1 = -e1e3
        assert_array_equal(field.blade('e13'), -1.0)
        assert_array_equal(field.blade('e23'), 1.0)
        assert_array_equal(field.blade('1'), 0.0)
        assert_array_equal(field.blade('e123'), 0.0)
        self.assertEqual(unpack(field, MAXWELL_PACKING)['magnetic_y'][0, 0, 0], 1.0)

    def test_grades(self):
        self.assertEqual(MAXWELL_PACKING.blades_of_grade(CL30, 1), [1, 2, 3])
        self.assertEqual(MAXWELL_PACKING.blades_of_grade(CL30, 2), [4, 5, 6])
        self.assertEqual(ADVECTION_PACKING.mapped_blades(CL20), [0, 1, 2])

    def test_shared_blade(self):
        packing = FieldPacking({'a': 'e13', 'b': 'e31'})
        with self.assertRaises(PackingError):
            packing.resolve(CL30)

    def test_unknown_field(self):
        with self.assertRaises(PackingError):
            pack({'pressure': np.zeros((4, 4))}, ADVECTION_PACKING, CL20)

    def test_empty_needs_shape(self):
        with self.assertRaises(ShapeError):
            pack({}, ADVECTION_PACKING, CL20)
        field = pack({}, ADVECTION_PACKING, CL20, shape=(4, 4))
        self.assertEqual(field.data.shape, (4, 1, 4, 4))

    def test_shape_mismatch(self):
        with self.assertRaises(ShapeError):
            pack({'scalar': np.zeros((4, 4)), 'velocity_x': np.zeros((4, 5))},
                 ADVECTION_PACKING, CL20)

    def test_dict_roundtrip(self):
        packing = FieldPacking.from_dict(MAXWELL_PACKING.to_dict())
        self.assertEqual(packing, MAXWELL_PACKING)


class TestShiftAndPad(TestCase):
    def test_circular_shift(self):
        data = np.arange(16, dtype=float).reshape(1, 1, 4, 4).repeat(4, axis=0)
        field = MultivectorField(CL20, data)
        shifted = circular_shift(field, (1, 2))
        self.assertEqual(shifted.data[0, 0, 1, 2], field.data[0, 0, 0, 0])
        back = circular_shift(shifted, (-1, -2))
        assert_array_equal(back.data, field.data)

    def test_pad(self):
        field = MultivectorField(CL20, np.ones((4, 1, 3, 3)))
        self.assertEqual(pad_periodic(field, 1).spatial_shape, (5, 5))
        padded = zero_pad(field, (1, 2))
        self.assertEqual(padded.spatial_shape, (5, 7))
        self.assertEqual(padded.data[0, 0, 0, 0], 0.0)
        with self.assertRaises(ShapeError):
            zero_pad(field, -1)
