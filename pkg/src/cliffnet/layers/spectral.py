"""
    cliffnet.layers.spectral
    ~~~~~~~~~~~~~~~~~~~~~~~~

    Clifford Fourier layers: transform each dual pair, split the pair
    spectra into one complex spectrum per blade, keep the corner blocks of
    low modes, multiply every kept mode by a complex-coefficient multivector
    weight with the geometric product and transform back.

    The imaginary unit of the blade spectra commutes with every blade, so
    the mode product is complex-linear and the layer commutes with circular
    shifts of the grid.
"""

import numpy as np
from .. import autodiff as ad
from ..algebra import Signature, mixing_tensor
from ..fields import MultivectorField
from ..transforms import dual_pairs
from ..errors import ShapeError, SignatureError
from ._base import Module
from .conv import CliffordConv, clifford_conv
from .activation import clifford_gelu
from .init import SpectralWeights, CliffordKernel, init_spectral

__all__ = [
    'corner_indices', 'clifford_spectral', 'real_spectral',
    'clifford_spectral_conv2d', 'clifford_spectral_conv3d', 'clifford_fourier_block',
    'CliffordSpectralConv2d', 'CliffordSpectralConv3d', 'CliffordFourierBlock',
    'SpectralConv',
]

_LETTERS = 'xyz'


def corner_indices(size, m):
    """Indices ``[:m]`` and ``[-m:]`` of an unshifted frequency axis."""
    if m < 1 or 2 * m > size:
        raise ShapeError('mode cutoff {} exceeds the Nyquist limit of a {} point axis'.format(m, size))
    return np.concatenate([np.arange(m), np.arange(size - m, size)])


def _to_pairs(x, pairs):
    """``x[batch, blade, ...]`` -> ``z[2, batch, pair, ...]``."""
    real = ad.stack([x[:, re] for re, _, _ in pairs], axis=1)
    imag = ad.stack([x[:, im] if sign > 0 else -x[:, im] for _, im, sign in pairs], axis=1)
    return ad.stack([real, imag])


def _from_pairs(z, pairs):
    blades = [None] * (2 * len(pairs))
    for k, (re, im, sign) in enumerate(pairs):
        blades[re] = z[0][:, k]
        blades[im] = z[1][:, k] if sign > 0 else -z[1][:, k]
    return ad.stack(blades, axis=1)


def _reflect(z, axes, shape):
    """``z(-xi)`` on every frequency axis."""
    for a, n in zip(axes, shape):
        z = ad.take(z, (-np.arange(n)) % n, axis=a)
    return z


def _blade_spectra(z, pairs, axes, shape):
    """Pair spectra ``z[2, batch, pair, ...]`` -> blade spectra
    ``[2, batch, blade, ...]``.

    A pair ``P = F(a + i b)`` of real fields gives
    ``F(a) = (P(xi) + conj P(-xi)) / 2`` and ``F(b) = (P(xi) - conj P(-xi)) / 2i``.
    """
    r = _reflect(z, axes, shape)
    blades = [None] * (2 * len(pairs))
    for k, (re, im, sign) in enumerate(pairs):
        pr, pi = z[0][:, k], z[1][:, k]
        qr, qi = r[0][:, k], r[1][:, k]
        blades[re] = ad.stack([(pr + qr) * 0.5, (pi - qi) * 0.5])
        b = ad.stack([(pi + qi) * 0.5, (qr - pr) * 0.5])
        blades[im] = b if sign > 0 else -b
    return ad.stack(blades, axis=2)


def _pair_spectra(c, pairs, axes, shape):
    """Blade spectra -> pair spectra of the real parts of the blade fields.

    ``(c(xi) + conj c(-xi)) / 2`` is the spectrum of ``Re ifft(c)``.
    """
    r = _reflect(c, axes, shape)
    h_re = (c[0] + r[0]) * 0.5
    h_im = (c[1] - r[1]) * 0.5
    real, imag = [], []
    for re, im, sign in pairs:
        real.append(h_re[:, re] - h_im[:, im] * sign)
        imag.append(h_im[:, re] + h_re[:, im] * sign)
    return ad.stack([ad.stack(real, axis=1), ad.stack(imag, axis=1)])


def clifford_spectral(x, weights, signature):
    """Clifford Fourier layer on ``x[batch, blade, c_in, spatial...]``.

    ``weights[2, blade, c_in, c_out, 2*m...]`` hold the real and imaginary
    parts of the multivector weight of every mode in the corner blocks;
    every other mode of the output is zero.
    """
    signature = Signature.parse(signature)
    x = ad.as_tensor(x)
    weights = ad.as_tensor(weights)
    d = signature.n
    if x.ndim != 3 + d:
        raise ShapeError('expected {} spatial axes'.format(d))
    if weights.ndim != 4 + d or weights.shape[0] != 2:
        raise ShapeError('spectral weights are [2, blade, c_in, c_out, modes...]')
    if x.shape[1] != signature.blade_count or weights.shape[1] != signature.blade_count:
        raise SignatureError('blade count does not match {}'.format(signature))
    if x.shape[2] != weights.shape[2]:
        raise ShapeError('feature has {} channels, weights expect {}'.format(x.shape[2], weights.shape[2]))
    if any(w % 2 for w in weights.shape[4:]):
        raise ShapeError('weights must cover an even number of modes per axis')

    pairs = dual_pairs(d)
    shape = x.shape[3:]
    modes = [w // 2 for w in weights.shape[4:]]
    axes = tuple(range(-d, 0))
    indices = [corner_indices(n, m) for n, m in zip(shape, modes)]

    spec = _blade_spectra(ad.dft(_to_pairs(x, pairs), axes), pairs, axes, shape)
    for a, idx in zip(axes, indices):
        spec = ad.take(spec, idx, axis=a)

    s = _LETTERS[:d]
    expr = 'rij,bic{0},jco{0}->bro{0}'.format(s)
    mix = mixing_tensor(signature)
    sr, si = spec[0], spec[1]
    wr, wi = weights[0], weights[1]
    real = ad.einsum(expr, mix, sr, wr) - ad.einsum(expr, mix, si, wi)
    imag = ad.einsum(expr, mix, sr, wi) + ad.einsum(expr, mix, si, wr)

    out = ad.stack([real, imag])
    for a, idx, n in zip(axes, indices, shape):
        out = ad.embed(out, idx, axis=a, size=n)
    z = ad.dft(_pair_spectra(out, pairs, axes, shape), axes, inverse=True)
    return _from_pairs(z, pairs)


def real_spectral(x, weights):
    """Real Fourier layer on ``x[batch, channel, spatial...]``.

    ``weights[2, c_in, c_out, 2*m...]`` are complex (re, im) and act on the
    corner blocks of every axis; the output is the real part of the inverse
    transform.
    """
    x = ad.as_tensor(x)
    weights = ad.as_tensor(weights)
    d = x.ndim - 2
    shape = x.shape[2:]
    axes = tuple(range(-d, 0))
    if weights.shape[0] != 2 or weights.ndim != 3 + d:
        raise ShapeError('real spectral weights are [2, c_in, c_out, modes...]')
    if x.shape[1] != weights.shape[1]:
        raise ShapeError('feature has {} channels, weights expect {}'.format(x.shape[1], weights.shape[1]))
    if any(w % 2 for w in weights.shape[3:]):
        raise ShapeError('weights must cover an even number of modes per axis')
    indices = [corner_indices(n, w // 2) for n, w in zip(shape, weights.shape[3:])]

    z = ad.dft(ad.stack([x, ad.Tensor(np.zeros(x.shape))]), axes)
    for a, idx in zip(axes, indices):
        z = ad.take(z, idx, axis=a)

    s = _LETTERS[:d]
    expr = 'bc{0},co{0}->bo{0}'.format(s)
    xr, xi = z[0], z[1]
    wr, wi = weights[0], weights[1]
    real = ad.einsum(expr, xr, wr) - ad.einsum(expr, xi, wi)
    imag = ad.einsum(expr, xr, wi) + ad.einsum(expr, xi, wr)

    z = ad.stack([real, imag])
    for a, idx, n in zip(axes, indices, shape):
        z = ad.embed(z, idx, axis=a, size=n)
    return ad.dft(z, axes, inverse=True)[0]


def _as_spectral_weights(weights):
    if isinstance(weights, SpectralWeights):
        return weights
    weights = np.asarray(weights)
    return SpectralWeights(weights, [w // 2 for w in weights.shape[4:]])


def _field_spectral(field, weights, n):
    if field.signature.n != n or field.spatial_ndim != n:
        raise SignatureError('expected a G^{0} field on a {0}D grid'.format(n))
    weights = _as_spectral_weights(weights)
    out = clifford_spectral(field.data[np.newaxis], weights.weights, field.signature)
    return MultivectorField(field.signature, out.value[0], field.spacing)


def clifford_spectral_conv2d(field, weights):
    return _field_spectral(field, weights, 2)


def clifford_spectral_conv3d(field, weights):
    return _field_spectral(field, weights, 3)


def clifford_fourier_block(field, w_spectral, w_conv, nonlinearity=clifford_gelu):
    """``nonlinearity(spectral(f) + conv1x1(f))`` on a field."""
    w_spectral = _as_spectral_weights(w_spectral)
    if not isinstance(w_conv, CliffordKernel):
        w_conv = CliffordKernel(w_conv)
    x = field.data[np.newaxis]
    out = clifford_spectral(x, w_spectral.weights, field.signature)
    out = out + clifford_conv(x, w_conv.weights, field.signature, w_conv.bias)
    if nonlinearity is not None:
        out = nonlinearity(out)
    return MultivectorField(field.signature, out.value[0], field.spacing)


class CliffordSpectralConv(Module):
    ndim = None
    default_signature = None

    def __init__(self, c_in, c_out, modes, signature=None, seed=None):
        super(CliffordSpectralConv, self).__init__()
        self.signature = Signature.parse(signature or self.default_signature)
        if np.isscalar(modes):
            modes = (modes,) * self.ndim
        self.modes = tuple(modes)
        self.c_in = c_in
        self.c_out = c_out
        self.weight = ad.Parameter(init_spectral(c_in, c_out, self.modes, self.signature, seed).weights)

    def forward(self, x):
        return clifford_spectral(x, self.weight, self.signature)


class CliffordSpectralConv2d(CliffordSpectralConv):
    ndim = 2
    default_signature = '2,0'


class CliffordSpectralConv3d(CliffordSpectralConv):
    ndim = 3
    default_signature = '3,0'


class CliffordFourierBlock(Module):
    """Clifford Fourier layer with a 1x1 Clifford convolution in place of
    the residual connection."""
    def __init__(self, c_in, c_out, modes, signature='2,0', activation=True, seed=None):
        super(CliffordFourierBlock, self).__init__()
        signature = Signature.parse(signature)
        rng = np.random.default_rng(seed)
        spectral_cls = CliffordSpectralConv2d if signature.n == 2 else CliffordSpectralConv3d
        self.spectral = spectral_cls(c_in, c_out, modes, signature, seed=rng)
        init_mode = 'scaled3d' if signature.n == 3 else 'default'
        conv = CliffordConv(c_in, c_out, (1,) * signature.n, signature,
                            init_mode=init_mode, seed=rng)
        self.conv = conv
        self.activation = activation

    def forward(self, x):
        out = self.spectral(x) + self.conv(x)
        if self.activation:
            out = clifford_gelu(out)
        return out


class SpectralConv(Module):
    """Real Fourier layer with complex weights stored as (re, im)."""
    def __init__(self, c_in, c_out, modes, ndim=2, seed=None):
        super(SpectralConv, self).__init__()
        if np.isscalar(modes):
            modes = (modes,) * ndim
        rng = np.random.default_rng(seed)
        scale = 1.0 / (c_in * c_out)
        shape = (2, c_in, c_out) + tuple(2 * m for m in modes)
        self.modes = tuple(modes)
        self.weight = ad.Parameter(scale * rng.uniform(0.0, 1.0, size=shape))

    def forward(self, x):
        return real_spectral(x, self.weight)
