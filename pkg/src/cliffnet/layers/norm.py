"""
    cliffnet.layers.norm
    ~~~~~~~~~~~~~~~~~~~~

    Clifford normalization: every multivector is treated as a vector of
    blade coefficients, centered and whitened with the inverse square
    root of its (regularized) blade covariance, then mixed by a learned
    ``blade x blade`` matrix per channel and shifted by a learned
    multivector.
"""

import numpy as np
from .. import autodiff as ad
from ..algebra import Signature
from ..fields import MultivectorField
from ..errors import ShapeError, NumericalError
from ._base import Module

__all__ = [
    'NORM_EPSILON', 'CliffordNormState', 'whiten_groups', 'whiten_batch',
    'clifford_groupnorm', 'clifford_batchnorm',
    'CliffordGroupNorm', 'CliffordBatchNorm', 'GroupNorm',
]

NORM_EPSILON = 1e-5
MOMENTUM = 0.1

_LETTERS = 'xyz'


class CliffordNormState:
    """Statistics and affine parameters of a Clifford normalization.

    :param gamma: ``[blade, blade, channel]``, identity by default
    :param beta: ``[blade, channel]``, zero by default
    :param running_mean: ``[blade, channel]``
    :param running_cov: ``[channel, blade, blade]``
    """
    def __init__(self, blades, channels, eps=NORM_EPSILON, momentum=MOMENTUM,
                 gamma=None, beta=None, running_mean=None, running_cov=None):
        self.blades = blades
        self.channels = channels
        self.eps = eps
        self.momentum = momentum
        if gamma is None:
            gamma = np.repeat(np.eye(blades)[:, :, np.newaxis], channels, axis=2)
        self.gamma = np.asarray(gamma, dtype=np.float64)
        self.beta = np.zeros((blades, channels)) if beta is None else np.asarray(beta, dtype=np.float64)
        self.running_mean = np.zeros((blades, channels)) if running_mean is None else np.asarray(running_mean)
        if running_cov is None:
            running_cov = np.repeat(np.eye(blades)[np.newaxis], channels, axis=0)
        self.running_cov = np.asarray(running_cov, dtype=np.float64)

    def update(self, mean, cov):
        """Blend batch statistics into the running ones."""
        m = self.momentum
        self.running_mean = (1 - m) * self.running_mean + m * mean
        self.running_cov = (1 - m) * self.running_cov + m * cov


def _check_psd(cov):
    value = cov.value if isinstance(cov, ad.Tensor) else cov
    if not np.all(np.isfinite(value)):
        raise NumericalError('covariance holds non-finite values')
    lowest = np.linalg.eigvalsh(value).min()
    if lowest < -1e-8 * max(1.0, np.abs(value).max()):
        raise NumericalError('covariance is not positive semi-definite (lowest eigenvalue {:g})'.format(lowest))


def whiten_groups(x, groups, eps=NORM_EPSILON):
    """Whitened ``x[batch, blade, channel, spatial...]`` per (batch, group).

    :return: ``(whitened, mean, covariance)``
    """
    x = ad.as_tensor(x)
    batch, blades, channels = x.shape[:3]
    if channels % groups:
        raise ShapeError('{} channels cannot be split into {} groups'.format(channels, groups))
    xg = x.reshape((batch, blades, groups, -1))
    mean = xg.mean(axis=3, keepdims=True)
    xc = xg - mean
    cov = ad.einsum('bigk,bjgk->bgij', xc, xc) / xg.shape[3]
    cov = cov + eps * np.eye(blades)
    _check_psd(cov)
    w = ad.inv_sqrtm(cov, eps)
    out = ad.einsum('bgij,bjgk->bigk', w, xc)
    return out.reshape(x.shape), mean, cov


def whiten_batch(x, eps=NORM_EPSILON, mean=None, cov=None):
    """Whitened ``x`` with statistics per channel over batch and space.

    Given ``mean`` and ``cov`` (running statistics) they are used instead.
    """
    x = ad.as_tensor(x)
    batch, blades, channels = x.shape[:3]
    d = x.ndim - 3
    xt = x.transpose((1, 2, 0) + tuple(range(3, 3 + d))).reshape((blades, channels, -1))
    if mean is None:
        mean = xt.mean(axis=2, keepdims=True)
        xc = xt - mean
        cov = ad.einsum('ick,jck->cij', xc, xc) / xt.shape[2]
    else:
        mean = ad.Tensor(np.asarray(mean)[:, :, np.newaxis])
        xc = xt - mean
        cov = ad.Tensor(np.asarray(cov))
    reg = cov + eps * np.eye(blades)
    _check_psd(reg)
    w = ad.inv_sqrtm(reg, eps)
    out = ad.einsum('cij,jck->ick', w, xc)
    shape = (blades, channels, batch) + x.shape[3:]
    out = out.reshape(shape).transpose((2, 0, 1) + tuple(range(3, 3 + d)))
    return out, mean, cov


def _affine(x, gamma, beta):
    d = x.ndim - 3
    s = _LETTERS[:d]
    out = ad.einsum('ijc,bjc{0}->bic{0}'.format(s), gamma, x)
    beta = ad.as_tensor(beta)
    return out + beta.reshape((1,) + beta.shape + (1,) * d)


def _field_norm(field, state, fn):
    if state.blades != field.blades or state.channels != field.channels:
        raise ShapeError('normalization state does not match the field')
    out = fn(field.data[np.newaxis])
    out = _affine(out, state.gamma, state.beta)
    return MultivectorField(field.signature, out.value[0], field.spacing)


def clifford_groupnorm(field, state, groups=1):
    return _field_norm(field, state, lambda x: whiten_groups(x, groups, state.eps)[0])


def clifford_batchnorm(x, state, training=False, gamma=None, beta=None):
    """Batch normalization of ``x[batch, blade, channel, spatial...]``.

    Only ``training=True`` updates the running statistics. ``gamma`` and
    ``beta`` default to the ones held by ``state``.
    """
    x = ad.as_tensor(x)
    if training:
        out, mean, cov = whiten_batch(x, state.eps)
        state.update(mean.value[:, :, 0], cov.value)
    else:
        out, _, _ = whiten_batch(x, state.eps, state.running_mean, state.running_cov)
    gamma = state.gamma if gamma is None else gamma
    beta = state.beta if beta is None else beta
    return _affine(out, gamma, beta)


class CliffordGroupNorm(Module):
    def __init__(self, channels, groups=1, signature='2,0', eps=NORM_EPSILON):
        super(CliffordGroupNorm, self).__init__()
        blades = Signature.parse(signature).blade_count
        state = CliffordNormState(blades, channels, eps)
        self.groups = groups
        self.eps = eps
        self.gamma = ad.Parameter(state.gamma)
        self.beta = ad.Parameter(state.beta)

    def forward(self, x):
        out, _, _ = whiten_groups(x, self.groups, self.eps)
        return _affine(out, self.gamma, self.beta)


class CliffordBatchNorm(Module):
    def __init__(self, channels, signature='2,0', eps=NORM_EPSILON, momentum=MOMENTUM):
        super(CliffordBatchNorm, self).__init__()
        blades = Signature.parse(signature).blade_count
        self.state = CliffordNormState(blades, channels, eps, momentum)
        self.gamma = ad.Parameter(self.state.gamma)
        self.beta = ad.Parameter(self.state.beta)
        self.training = False

    def forward(self, x):
        return clifford_batchnorm(x, self.state, self.training, self.gamma, self.beta)


class GroupNorm(Module):
    """Real group normalization of ``x[batch, channel, spatial...]``."""
    def __init__(self, channels, groups=1, eps=NORM_EPSILON):
        super(GroupNorm, self).__init__()
        self.groups = groups
        self.eps = eps
        self.gamma = ad.Parameter(np.ones(channels))
        self.beta = ad.Parameter(np.zeros(channels))

    def forward(self, x):
        x = ad.as_tensor(x)
        shape = (1, -1) + (1,) * (x.ndim - 2)
        out, _, _ = whiten_groups(x.reshape((x.shape[0], 1) + x.shape[1:]), self.groups, self.eps)
        out = out.reshape(x.shape)
        return out * self.gamma.reshape(shape) + self.beta.reshape(shape)
