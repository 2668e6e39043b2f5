"""
    cliffnet.layers.init
    ~~~~~~~~~~~~~~~~~~~~

    Parameter bundles of the Clifford layers and their initializers.
"""

import numpy as np
from ..algebra import Signature
from ..errors import ShapeError

__all__ = [
    'CliffordKernel', 'RotationalKernel', 'SpectralWeights',
    'init_clifford', 'init_rotational', 'init_spectral', 'uniform_bound',
]

#: bound divisor of the ``scaled3d`` mode
SCALED3D_FACTOR = 8.0


class CliffordKernel:
    """``weights[blade, c_out, c_in, k...]`` and an optional bias
    multivector per output channel, ``bias[blade, c_out]``."""
    def __init__(self, weights, bias=None, signature=None):
        weights = np.asarray(weights, dtype=np.float64)
        if signature is not None:
            signature = Signature.parse(signature)
            if weights.shape[0] != signature.blade_count:
                raise ShapeError('{} kernels need {} blades'.format(signature, signature.blade_count))
        if any(k % 2 == 0 for k in weights.shape[3:]):
            raise ShapeError('kernel extents must be odd')
        self.weights = weights
        self.bias = None if bias is None else np.asarray(bias, dtype=np.float64)
        self.signature = signature

    @property
    def c_out(self):
        return self.weights.shape[1]

    @property
    def c_in(self):
        return self.weights.shape[2]

    @property
    def kernel_size(self):
        return self.weights.shape[3:]

    def parameter_count(self):
        count = self.weights.size
        if self.bias is not None:
            count += self.bias.size
        return count


class RotationalKernel:
    """Six tensors ``W[0..5]`` of shape ``[c_out, c_in, k, k]``.

    ``W[0..3]`` is the quaternion filter, ``W[4]`` the rotation scale and
    ``W[5]`` the scalar to vector coupling. Faithful kernels carry only
    ``W[0..3]``.
    """
    def __init__(self, weights, epsilon=1e-12, bias=None):
        weights = np.asarray(weights, dtype=np.float64)
        if weights.shape[0] not in (4, 6) or weights.ndim != 5:
            raise ShapeError('rotational kernels are [4 or 6, c_out, c_in, k, k]')
        self.weights = weights
        self.epsilon = epsilon
        self.bias = None if bias is None else np.asarray(bias, dtype=np.float64)

    @property
    def faithful(self):
        return self.weights.shape[0] == 4


class SpectralWeights:
    """``weights[2, blade, c_in, c_out, 2*m...]``: real and imaginary parts of
    a complex-coefficient multivector for every mode of the corner blocks."""
    def __init__(self, weights, modes):
        weights = np.asarray(weights, dtype=np.float64)
        modes = tuple(int(m) for m in modes)
        if weights.ndim < 5 or weights.shape[0] != 2:
            raise ShapeError('spectral weights are [2, blade, c_in, c_out, modes...]')
        if weights.shape[4:] != tuple(2 * m for m in modes):
            raise ShapeError('weights {} do not cover modes {}'.format(weights.shape, modes))
        self.weights = weights
        self.modes = modes

    @property
    def complex_weights(self):
        return self.weights[0] + 1j * self.weights[1]


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def uniform_bound(c_in, kernel_size, gain=1.0, mode='default'):
    fan_in = c_in * int(np.prod(kernel_size, dtype=np.int64))
    bound = np.sqrt(gain / fan_in)
    if mode == 'scaled3d':
        bound /= SCALED3D_FACTOR
    elif mode != 'default':
        raise ValueError('unknown init mode: {!r}'.format(mode))
    return bound


def init_clifford(c_out, c_in, kernel_size, signature, mode='default', seed=None, gain=1.0, bias=False):
    """Uniform samples in ``+-sqrt(gain / fan_in)`` for every blade kernel.

    ``mode='scaled3d'`` divides the bound by 8.
    """
    signature = Signature.parse(signature)
    kernel_size = tuple(kernel_size)
    rng = _rng(seed)
    bound = uniform_bound(c_in, kernel_size, gain, mode)
    shape = (signature.blade_count, c_out, c_in) + kernel_size
    weights = rng.uniform(-bound, bound, size=shape)
    b = rng.uniform(-bound, bound, size=(signature.blade_count, c_out)) if bias else None
    return CliffordKernel(weights, b, signature)


def init_rotational(c_out, c_in, kernel_size, seed=None, gain=1.0, faithful=False, epsilon=1e-12):
    rng = _rng(seed)
    kernel_size = tuple(kernel_size)
    bound = uniform_bound(c_in, kernel_size, gain)
    count = 4 if faithful else 6
    weights = rng.uniform(-bound, bound, size=(count, c_out, c_in) + kernel_size)
    return RotationalKernel(weights, epsilon)


def init_spectral(c_in, c_out, modes, signature, seed=None):
    signature = Signature.parse(signature)
    rng = _rng(seed)
    scale = 1.0 / (c_in * c_out)
    shape = (2, signature.blade_count, c_in, c_out) + tuple(2 * m for m in modes)
    return SpectralWeights(scale * rng.uniform(0.0, 1.0, size=shape), modes)
