"""Layer properties: oracle agreement, translation equivariance,
spectral identity, whitening and parameter counts."""

import numpy as np
from .. import autodiff as ad
from .. import oracle
from ..algebra import CL20, CL30
from ..layers import (
    clifford_conv, rotational_conv, clifford_spectral, whiten_groups, whiten_batch,
    init_clifford, init_rotational, init_spectral, CliffordConv2d, CliffordConv3d,
)
from ..models import SurrogateConfig, create_model
from ._base import check_record, scaled, rel_error

SUITE = 'layers'

ORACLE_CASES = 3
EQUIVARIANCE_CASES = 100
WHITENING_CASES = 10


def _shift(x, offsets):
    axes = tuple(range(x.ndim - len(offsets), x.ndim))
    return np.roll(x, offsets, axis=axes)


def _equivariance_errors(layer, rng, blades, channels, shape, cases):
    errors = []
    for _ in range(cases):
        x = rng.standard_normal((1, blades, channels) + shape)
        offsets = tuple(int(rng.integers(0, s)) for s in shape)
        with ad.no_grad():
            lhs = layer(_shift(x, offsets)).value
            rhs = _shift(layer(x).value, offsets)
        errors.append(rel_error(lhs, rhs))
    return errors


def _oracle_conv_errors(signature, rng, shape, cases, padding):
    errors = []
    for _ in range(cases):
        kernel = init_clifford(2, 2, (3,) * len(shape), signature, seed=rng)
        f = rng.standard_normal((signature.blade_count, 2) + shape)
        with ad.no_grad():
            got = clifford_conv(f[np.newaxis], kernel.weights, signature, padding=padding).value[0]
        want = oracle.oracle_conv(tuple(signature), f, kernel.weights, padding)
        errors.append(rel_error(got, want))
    return errors


def _oracle_spectral_errors(rng, cases):
    errors = []
    for _ in range(cases):
        modes = (2, 3)
        weights = init_spectral(2, 1, modes, CL20, rng).weights
        f = rng.standard_normal((4, 2, 8, 8))
        with ad.no_grad():
            got = clifford_spectral(f[np.newaxis], weights, CL20).value[0]
        want = oracle.oracle_spectral_conv((2, 0), f, weights, modes)
        errors.append(rel_error(got, want))
    return errors


def _whitening_errors(rng, cases):
    errors = []
    for _ in range(cases):
        mix = rng.standard_normal((4, 4)) + 2 * np.eye(4)
        x = np.einsum('ij,bjc...->bic...', mix, rng.standard_normal((3, 4, 2, 8, 8)))
        with ad.no_grad():
            grouped = whiten_groups(x, 1, eps=1e-12)[0].value
            batched = whiten_batch(x, eps=1e-12)[0].value
        flat = grouped.reshape(3, 4, -1)
        flat = flat - flat.mean(axis=2, keepdims=True)
        cov = np.einsum('bik,bjk->bij', flat, flat) / flat.shape[2]
        errors.append(np.max(np.abs(cov - np.eye(4))))
        flat = batched.transpose(2, 1, 0, 3, 4).reshape(2, 4, -1)
        flat = flat - flat.mean(axis=2, keepdims=True)
        cov = np.einsum('cik,cjk->cij', flat, flat) / flat.shape[2]
        errors.append(np.max(np.abs(cov - np.eye(4))))
    return errors


def _parity_error():
    cfno = create_model(SurrogateConfig.desk('cfno'))
    fno = create_model(SurrogateConfig.desk('fno'))
    a, b = cfno.parameter_count(), fno.parameter_count()
    return abs(a - b) / b


def layers_suite(seed=0, scale=1.0):
    rng = np.random.default_rng([seed, 3])
    oracle_cases = scaled(ORACLE_CASES, scale)
    cases = scaled(EQUIVARIANCE_CASES, scale)
    records = []

    for padding in ('periodic', 'zero'):
        records.append(check_record(
            SUITE, 'conv2d_oracle_' + padding,
            _oracle_conv_errors(CL20, rng, (8, 8), oracle_cases, padding), 1e-10, oracle_cases))
    records.append(check_record(
        SUITE, 'conv3d_oracle', _oracle_conv_errors(CL30, rng, (6, 6, 6), 1, 'periodic'), 1e-10, 1))
    records.append(check_record(
        SUITE, 'spectral2d_oracle', _oracle_spectral_errors(rng, oracle_cases), 1e-10, oracle_cases))

    w2 = init_clifford(2, 2, (3, 3), CL20, seed=rng).weights
    w3 = init_clifford(2, 2, (3, 3, 3), CL30, mode='scaled3d', seed=rng).weights
    wr = init_rotational(2, 2, (3, 3), seed=rng).weights
    s2 = init_spectral(2, 2, (4, 4), CL20, rng).weights
    s3 = init_spectral(2, 2, (2, 2, 2), CL30, rng).weights
    layers = (
        ('conv2d', lambda x: clifford_conv(x, w2, CL20), 4, (16, 16), 1e-12),
        ('conv3d', lambda x: clifford_conv(x, w3, CL30), 8, (8, 8, 8), 1e-12),
        ('rotational2d', lambda x: rotational_conv(x, wr), 4, (16, 16), 1e-12),
        ('spectral2d', lambda x: clifford_spectral(x, s2, CL20), 4, (16, 16), 1e-9),
        ('spectral3d', lambda x: clifford_spectral(x, s3, CL30), 8, (8, 8, 8), 1e-9),
    )
    for name, layer, blades, shape, tol in layers:
        records.append(check_record(
            SUITE, 'equivariance_' + name,
            _equivariance_errors(layer, rng, blades, 2, shape, cases), tol, cases))

    identity = np.zeros((2, 4, 1, 1, 16, 16))
    identity[0, 0, 0, 0] = 1.0
    errors = []
    for _ in range(scaled(10, scale)):
        x = rng.standard_normal((1, 4, 1, 16, 16))
        with ad.no_grad():
            errors.append(rel_error(clifford_spectral(x, identity, CL20).value, x))
    records.append(check_record(SUITE, 'spectral_identity', errors, 1e-9, len(errors)))

    w_cases = scaled(WHITENING_CASES, scale)
    records.append(check_record(
        SUITE, 'whitening_identity', _whitening_errors(rng, w_cases), 1e-6, 2 * w_cases))

    errors = []
    for c_in, c_out, k in ((1, 1, 1), (3, 5, 3), (16, 16, 3)):
        conv = CliffordConv2d(c_in, c_out, k, seed=0)
        errors.append(abs(conv.parameter_count() - 4 * c_out * c_in * k * k))
        conv = CliffordConv3d(c_in, c_out, k, seed=0)
        errors.append(abs(conv.parameter_count() - 8 * c_out * c_in * k ** 3))
    records.append(check_record(SUITE, 'conv_parameter_count', errors, 0.0, len(errors)))
    records.append(check_record(SUITE, 'cfno_fno_parity', [_parity_error()], 0.1, 1))
    return records
