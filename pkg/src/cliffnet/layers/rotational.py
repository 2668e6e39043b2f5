"""
    cliffnet.layers.rotational
    ~~~~~~~~~~~~~~~~~~~~~~~~~~

    Rotational Clifford convolution on G^2 fields. The quaternion filter
    ``W[0..3]`` produces the scalar response and, normalized, a rotation
    matrix acting on the ``(e1, e2, e1e2)`` components::

        [[W0, -W1,     -W2,     -W3    ],
         [W5,  W4 R00,  W4 R01,  W4 R02],
         [W5,  W4 R10,  W4 R11,  W4 R12],
         [W5,  W4 R20,  W4 R21,  W4 R22]]

    The faithful variant fixes ``W4 = 1`` and ``W5 = 0``.
"""

import numpy as np
from .. import autodiff as ad
from ..algebra import CL20, QUATERNION_EPSILON, rotation_matrix_entries
from ..fields import MultivectorField
from ..errors import ShapeError, SignatureError
from ._base import Module
from .conv import blade_conv
from .init import RotationalKernel, init_rotational

__all__ = [
    'rotational_kernel_rows', 'assemble_rotational_kernel',
    'rotational_conv', 'rotational_clifford_conv2d', 'RotationalCliffordConv2d',
]


def rotational_kernel_rows(weights, epsilon=QUATERNION_EPSILON):
    """The 4x4 kernel matrix as nested rows of ``[c_out, c_in, k, k]`` tensors."""
    weights = ad.as_tensor(weights)
    w = [weights[i] for i in range(weights.shape[0])]
    if len(w) == 4:
        scale = 1.0
        coupling = ad.Tensor(np.zeros(weights.shape[1:]))
    elif len(w) == 6:
        scale = w[4]
        coupling = w[5]
    else:
        raise ShapeError('rotational kernels carry 4 or 6 components')

    rot = rotation_matrix_entries(w[0], w[1], w[2], w[3], epsilon)
    rows = [[w[0], -w[1], -w[2], -w[3]]]
    for r in range(3):
        rows.append([coupling] + [scale * rot[r][c] for c in range(3)])
    return rows


def assemble_rotational_kernel(weights, epsilon=QUATERNION_EPSILON):
    """Blade-mixing weight ``[4*c_out, 4*c_in, k, k]``."""
    weights = ad.as_tensor(weights)
    c_out, c_in = weights.shape[1:3]
    ksize = weights.shape[3:]
    rows = rotational_kernel_rows(weights, epsilon)
    matrix = ad.stack([ad.stack(row) for row in rows])
    # [r, i, c_out, c_in, k, k] -> [r, c_out, i, c_in, k, k]
    matrix = matrix.transpose((0, 2, 1, 3, 4, 5))
    return matrix.reshape((4 * c_out, 4 * c_in) + ksize)


def rotational_conv(x, weights, epsilon=QUATERNION_EPSILON, bias=None, padding='periodic', stride=1):
    x = ad.as_tensor(x)
    weights = ad.as_tensor(weights)
    if x.shape[1] != 4:
        raise SignatureError('rotational convolution needs G^2 features')
    if x.ndim != 5 or weights.ndim != 5:
        raise ShapeError('rotational convolution is two dimensional')
    if x.shape[2] != weights.shape[2]:
        raise ShapeError('feature has {} channels, kernel expects {}'.format(x.shape[2], weights.shape[2]))
    matrix = assemble_rotational_kernel(weights, epsilon)
    return blade_conv(x, matrix, weights.shape[1], bias, padding, stride)


def rotational_clifford_conv2d(field, kernel, padding='periodic', stride=1):
    if field.signature.n != 2:
        raise SignatureError('rotational convolution needs a G^2 field')
    if not isinstance(kernel, RotationalKernel):
        kernel = RotationalKernel(kernel)
    out = rotational_conv(field.data[np.newaxis], kernel.weights, kernel.epsilon,
                          kernel.bias, padding, stride)
    return MultivectorField(field.signature, out.value[0], field.spacing)


class RotationalCliffordConv2d(Module):
    def __init__(self, c_in, c_out, kernel_size=3, padding='periodic', stride=1,
                 faithful=False, epsilon=QUATERNION_EPSILON, bias=False, seed=None):
        super(RotationalCliffordConv2d, self).__init__()
        if np.isscalar(kernel_size):
            kernel_size = (kernel_size, kernel_size)
        kernel = init_rotational(c_out, c_in, kernel_size, seed=seed, faithful=faithful, epsilon=epsilon)
        self.signature = CL20
        self.c_in = c_in
        self.c_out = c_out
        self.padding = padding
        self.stride = stride
        self.epsilon = epsilon
        self.faithful = faithful
        self.weight = ad.Parameter(kernel.weights)
        self.bias = ad.Parameter(np.zeros((4, c_out))) if bias else None

    def forward(self, x):
        return rotational_conv(x, self.weight, self.epsilon, self.bias, self.padding, self.stride)
