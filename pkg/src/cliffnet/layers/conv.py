"""
    cliffnet.layers.conv
    ~~~~~~~~~~~~~~~~~~~~

    Clifford convolution. The geometric product of every feature tap with
    its multivector kernel tap is linear in the feature blades, so the
    whole layer is one real cross-correlation whose weight is the
    blade-mixing kernel matrix::

        out_r = sum_i K[r][i] * f_i,   K[r][i] = sum_j M[r, i, j] W_j
"""

import numpy as np
from .. import autodiff as ad
from ..algebra import Signature, mixing_tensor
from ..fields import MultivectorField
from ..errors import ShapeError, SignatureError
from ._base import Module
from .init import CliffordKernel, init_clifford

__all__ = [
    'assemble_kernel', 'clifford_conv', 'clifford_conv2d', 'clifford_conv3d',
    'CliffordConv2d', 'CliffordConv3d', 'Conv',
]


def assemble_kernel(weights, signature):
    """Blade-mixing weight ``[blade*c_out, blade*c_in, k...]`` of a kernel
    ``[blade, c_out, c_in, k...]``."""
    signature = Signature.parse(signature)
    weights = ad.as_tensor(weights)
    blades = signature.blade_count
    if weights.shape[0] != blades:
        raise SignatureError('{} kernels need {} blades, got {}'.format(signature, blades, weights.shape[0]))
    c_out, c_in = weights.shape[1:3]
    ksize = weights.shape[3:]

    flat = weights.reshape(blades, -1)
    mixed = ad.einsum('rij,jk->rik', mixing_tensor(signature), flat)
    mixed = mixed.reshape((blades, blades, c_out, c_in) + ksize)
    order = (0, 2, 1, 3) + tuple(range(4, 4 + len(ksize)))
    return mixed.transpose(order).reshape((blades * c_out, blades * c_in) + ksize)


def blade_conv(x, matrix, c_out, bias=None, padding='periodic', stride=1):
    """Run an assembled blade-mixing weight over ``x[batch, blade, c_in, ...]``."""
    x = ad.as_tensor(x)
    batch, blades, c_in = x.shape[:3]
    spatial = x.shape[3:]
    out = ad.conv(x.reshape((batch, blades * c_in) + spatial), matrix, padding, stride)
    out = out.reshape((batch, blades, c_out) + out.shape[2:])
    if bias is not None:
        out = out + ad.as_tensor(bias).reshape((1, blades, c_out) + (1,) * len(spatial))
    return out


def clifford_conv(x, weights, signature, bias=None, padding='periodic', stride=1):
    """Clifford cross-correlation on ``x[batch, blade, c_in, spatial...]``."""
    x = ad.as_tensor(x)
    weights = ad.as_tensor(weights)
    if x.ndim != weights.ndim:
        raise ShapeError('feature and kernel rank differ')
    if x.shape[1] != weights.shape[0]:
        raise SignatureError('feature has {} blades, kernel {}'.format(x.shape[1], weights.shape[0]))
    if x.shape[2] != weights.shape[2]:
        raise ShapeError('feature has {} channels, kernel expects {}'.format(x.shape[2], weights.shape[2]))
    matrix = assemble_kernel(weights, signature)
    return blade_conv(x, matrix, weights.shape[1], bias, padding, stride)


def _field_conv(field, kernel, padding, stride, n):
    if not isinstance(kernel, CliffordKernel):
        kernel = CliffordKernel(kernel)
    if field.spatial_ndim != n:
        raise ShapeError('expected {} spatial axes'.format(n))
    out = clifford_conv(field.data[np.newaxis], kernel.weights, field.signature,
                        kernel.bias, padding, stride)
    return MultivectorField(field.signature, out.value[0], field.spacing)


def clifford_conv2d(field, kernel, padding='periodic', stride=1):
    return _field_conv(field, kernel, padding, stride, 2)


def clifford_conv3d(field, kernel, padding='periodic', stride=1):
    return _field_conv(field, kernel, padding, stride, 3)


class CliffordConv(Module):
    """Clifford convolution owning its kernel (and optional bias)."""
    ndim = None

    def __init__(self, c_in, c_out, kernel_size=3, signature='2,0', padding='periodic',
                 stride=1, bias=False, init_mode='default', seed=None):
        super(CliffordConv, self).__init__()
        self.signature = Signature.parse(signature)
        if np.isscalar(kernel_size):
            kernel_size = (kernel_size,) * self.ndim
        kernel = init_clifford(c_out, c_in, kernel_size, self.signature,
                               mode=init_mode, seed=seed, bias=bias)
        self.c_in = c_in
        self.c_out = c_out
        self.padding = padding
        self.stride = stride
        self.weight = ad.Parameter(kernel.weights)
        self.bias = ad.Parameter(kernel.bias) if bias else None

    def kernel(self):
        return CliffordKernel(self.weight.value, None if self.bias is None else self.bias.value,
                              self.signature)

    def forward(self, x):
        return clifford_conv(x, self.weight, self.signature, self.bias, self.padding, self.stride)


class CliffordConv2d(CliffordConv):
    ndim = 2


class CliffordConv3d(CliffordConv):
    ndim = 3

    def __init__(self, c_in, c_out, kernel_size=3, signature='3,0', padding='periodic',
                 stride=1, bias=False, init_mode='scaled3d', seed=None):
        super(CliffordConv3d, self).__init__(c_in, c_out, kernel_size, signature, padding,
                                             stride, bias, init_mode, seed)


class Conv(Module):
    """Real convolution on ``x[batch, channel, spatial...]``."""
    def __init__(self, c_in, c_out, kernel_size=3, ndim=2, padding='periodic', stride=1,
                 bias=True, seed=None):
        super(Conv, self).__init__()
        if np.isscalar(kernel_size):
            kernel_size = (kernel_size,) * ndim
        rng = np.random.default_rng(seed)
        bound = 1.0 / np.sqrt(c_in * int(np.prod(kernel_size)))
        self.padding = padding
        self.stride = stride
        self.weight = ad.Parameter(rng.uniform(-bound, bound, size=(c_out, c_in) + tuple(kernel_size)))
        self.bias = ad.Parameter(rng.uniform(-bound, bound, size=c_out)) if bias else None

    def forward(self, x):
        out = ad.conv(x, self.weight, self.padding, self.stride)
        if self.bias is not None:
            out = out + self.bias.reshape((1, -1) + (1,) * (out.ndim - 2))
        return out
