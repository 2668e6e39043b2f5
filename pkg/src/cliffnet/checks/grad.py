"""Analytic gradients of every layer against central finite differences."""

import numpy as np
from .. import autodiff as ad
from ..algebra import CL20, CL30
from ..layers import (
    clifford_conv, rotational_conv, clifford_spectral, real_spectral,
    clifford_batchnorm, CliffordNormState, CliffordGroupNorm,
)
from ._base import check_record, scaled

SUITE = 'grad'

SEEDS = 10
SAMPLES = 100
STEP = 1e-5
TOLERANCE = 1e-5


def _p(rng, *shape, scale=1.0):
    return ad.Parameter(scale * rng.standard_normal(shape))


def _projected(out, rng):
    # a fixed random projection keeps every output coordinate in the loss
    proj = rng.standard_normal(out.shape)
    return lambda y: (y * proj).sum()


def _case_conv2d(rng):
    x = _p(rng, 2, 4, 2, 6, 6)
    w = _p(rng, 4, 2, 2, 3, 3, scale=0.3)
    b = _p(rng, 4, 2)
    return lambda: clifford_conv(x, w, CL20, b), [x, w, b]


def _case_conv3d(rng):
    x = _p(rng, 1, 8, 1, 5, 5, 5)
    w = _p(rng, 8, 2, 1, 3, 3, 3, scale=0.3)
    return lambda: clifford_conv(x, w, CL30, padding='zero', stride=2), [x, w]


def _case_rotational(rng):
    x = _p(rng, 1, 4, 2, 6, 6)
    w = _p(rng, 6, 2, 2, 3, 3, scale=0.5)
    return lambda: rotational_conv(x, w), [x, w]


def _case_rotational_faithful(rng):
    x = _p(rng, 1, 4, 1, 5, 5)
    w = _p(rng, 4, 2, 1, 3, 3, scale=0.5)
    return lambda: rotational_conv(x, w, padding='zero'), [x, w]


def _case_spectral2d(rng):
    x = _p(rng, 1, 4, 2, 8, 8)
    w = _p(rng, 2, 4, 2, 2, 4, 6, scale=0.3)
    return lambda: clifford_spectral(x, w, CL20), [x, w]


def _case_spectral3d(rng):
    x = _p(rng, 1, 8, 1, 4, 4, 4)
    w = _p(rng, 2, 8, 1, 1, 2, 2, 2, scale=0.3)
    return lambda: clifford_spectral(x, w, CL30), [x, w]


def _case_real_spectral(rng):
    x = _p(rng, 2, 2, 8, 8)
    w = _p(rng, 2, 2, 3, 4, 6, scale=0.3)
    return lambda: real_spectral(x, w), [x, w]


def _case_groupnorm(rng):
    x = _p(rng, 2, 4, 4, 4, 4)
    norm = CliffordGroupNorm(4, groups=2)
    norm.gamma.value = norm.gamma.value + 0.1 * rng.standard_normal(norm.gamma.shape)
    return lambda: norm(x), [x, norm.gamma, norm.beta]


def _case_batchnorm(rng):
    x = _p(rng, 3, 4, 2, 4, 4)
    state = CliffordNormState(4, 2)
    gamma = ad.Parameter(state.gamma + 0.1 * rng.standard_normal(state.gamma.shape))
    beta = _p(rng, 4, 2)
    return lambda: clifford_batchnorm(x, state, True, gamma, beta), [x, gamma, beta]


def _case_gelu(rng):
    x = _p(rng, 3, 4, 5)
    return lambda: ad.gelu(x), [x]


def _case_inv_sqrtm(rng):
    a = _p(rng, 2, 4, 4, scale=0.5)

    def build():
        c = ad.einsum('bij,bkj->bik', a, a) + np.eye(4)
        return ad.inv_sqrtm(c)
    return build, [a]


CASES = (
    ('conv2d', _case_conv2d),
    ('conv3d', _case_conv3d),
    ('rotational', _case_rotational),
    ('rotational_faithful', _case_rotational_faithful),
    ('spectral2d', _case_spectral2d),
    ('spectral3d', _case_spectral3d),
    ('real_spectral', _case_real_spectral),
    ('groupnorm', _case_groupnorm),
    ('batchnorm', _case_batchnorm),
    ('gelu', _case_gelu),
    ('inv_sqrtm', _case_inv_sqrtm),
)


def grad_check(build, seed, samples=SAMPLES, h=STEP):
    """Finite-difference report of one op built by ``build(rng)``."""
    rng = np.random.default_rng(seed)
    forward, params = build(rng)
    loss = _projected(forward(), rng)
    return ad.fd_check(lambda: loss(forward()), params, h=h, seed=seed, samples=samples)


def grad_suite(seed=0, scale=1.0):
    seeds = scaled(SEEDS, scale)
    samples = scaled(SAMPLES, min(scale, 1.0))
    records = []
    for k, (name, build) in enumerate(CASES):
        errors = []
        for s in range(seeds):
            report = grad_check(build, [seed, k, s], samples)
            errors.append(report['max_rel_error'])
        records.append(check_record(SUITE, 'fd_' + name, errors, TOLERANCE, seeds * samples))
    return records
