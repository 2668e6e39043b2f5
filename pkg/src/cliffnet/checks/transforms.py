"""Clifford Fourier transform structure and the convolution theorems."""

import numpy as np
from ..algebra import CL20, CL30
from ..fields import MultivectorField, circular_shift
from .. import oracle
from .. import transforms as tf
from ._base import check_record, scaled, rel_error, random_field

SUITE = 'transforms'

FT_CASES = 10
THEOREM_CASES = 50


def _ft(field):
    if field.signature.n == 2:
        return tf.clifford_ft_2d(field)
    return tf.clifford_ft_3d(field)


def _pair_errors(signature, rng, shape, cases):
    errors = []
    for _ in range(cases):
        f = random_field(rng, signature, 1, shape)
        spectrum = _ft(f)
        z = tf.split_pairs(f.data, signature.n)
        want = np.stack([oracle.oracle_dft(z[k, 0]) for k in range(len(z))])
        errors.append(rel_error(spectrum.pairs()[:, 0], want))
    return errors


def _oracle_ft_errors(signature, rng, shape, cases):
    errors = []
    for _ in range(cases):
        f = random_field(rng, signature, 1, shape)
        got = _ft(f).data[:, 0]
        want = oracle.oracle_clifford_ft(tuple(signature), f.data[:, 0])
        errors.append(rel_error(got, want))
    return errors


def _roundtrip_errors(signature, rng, shape, cases):
    ft, ift = (tf.clifford_ft_2d, tf.clifford_ift_2d) if signature.n == 2 else \
        (tf.clifford_ft_3d, tf.clifford_ift_3d)
    errors = []
    for _ in range(cases):
        f = random_field(rng, signature, 2, shape)
        errors.append(rel_error(ift(ft(f)).data, f.data))
    return errors


def _linearity_errors(signature, rng, shape, cases):
    errors = []
    for _ in range(cases):
        f = random_field(rng, signature, 1, shape)
        g = random_field(rng, signature, 1, shape)
        alpha, beta = rng.standard_normal(2)
        lhs = _ft(f * alpha + g * beta).data
        rhs = alpha * _ft(f).data + beta * _ft(g).data
        errors.append(rel_error(lhs, rhs))
    return errors


def _shift_errors(signature, rng, shape, cases):
    errors = []
    for _ in range(cases):
        f = random_field(rng, signature, 1, shape)
        offsets = [int(rng.integers(0, s)) for s in shape]
        got = _ft(circular_shift(f, offsets)).data
        want = tf.phase_shift(_ft(f), offsets).data
        errors.append(rel_error(got, want))
    return errors


def _theorem_errors(signature, kind, rng, shape, cases):
    errors = []
    for _ in range(cases):
        f = random_field(rng, signature, 1, shape)
        k = MultivectorField(signature, rng.standard_normal(f.data.shape))
        direct = tf.circular_convolve_direct(f, k, kind)
        got = _ft(direct).data
        want = tf.convolution_theorem(f, k, kind).data
        errors.append(rel_error(got, want))
    return errors


def transforms_suite(seed=0, scale=1.0):
    rng = np.random.default_rng([seed, 2])
    ft_cases = scaled(FT_CASES, scale)
    theorem_cases = scaled(THEOREM_CASES, scale)
    records = []

    grids = ((CL20, (16, 16), (8, 8)), (CL30, (8, 8, 8), (4, 4, 4)))
    for signature, shape, small in grids:
        tag = '{}d'.format(signature.n)
        records.append(check_record(
            SUITE, 'ft_dual_pairs_' + tag, _pair_errors(signature, rng, shape, ft_cases), 1e-10, ft_cases))
        records.append(check_record(
            SUITE, 'ft_oracle_' + tag, _oracle_ft_errors(signature, rng, small, ft_cases), 1e-10, ft_cases))
        records.append(check_record(
            SUITE, 'ft_roundtrip_' + tag, _roundtrip_errors(signature, rng, shape, ft_cases), 1e-10, ft_cases))
        records.append(check_record(
            SUITE, 'ft_linearity_' + tag, _linearity_errors(signature, rng, shape, ft_cases), 1e-12, ft_cases))
        records.append(check_record(
            SUITE, 'ft_shift_' + tag, _shift_errors(signature, rng, shape, ft_cases), 1e-10, ft_cases))

    for kind in ('spinor', 'vector', 'mixed'):
        records.append(check_record(
            SUITE, 'conv_theorem_{}_2d'.format(kind),
            _theorem_errors(CL20, kind, rng, (16, 16), theorem_cases), 1e-9, theorem_cases))
    records.append(check_record(
        SUITE, 'conv_theorem_full_3d',
        _theorem_errors(CL30, 'full', rng, (8, 8, 8), theorem_cases), 1e-9, theorem_cases))
    return records
