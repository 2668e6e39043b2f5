"""
    cliffnet.transforms
    ~~~~~~~~~~~~~~~~~~~

    Complex DFTs on grids and the Clifford Fourier transforms built from
    them.

    The pseudoscalar plays the role of the imaginary unit. A G^2 field
    splits into the spinor pair ``f0 + f12 i2`` and the vector pair
    ``f1 + f2 i2``; a G^3 field into four pairs around ``i3``. Each pair is
    an ordinary complex grid, transformed with an unnormalized forward and
    a ``1/N`` normalized inverse DFT.
"""

import numpy as np
from .algebra import Signature, geometric_product, grade, blade_masks
from .fields import MultivectorField
from .errors import SignatureError, ShapeError

__all__ = [
    'DUAL_PAIRS_2D', 'DUAL_PAIRS_3D', 'dual_pairs',
    'CliffordSpectrum', 'dft', 'dft_2d', 'dft_3d',
    'split_pairs', 'merge_pairs',
    'clifford_ft_2d', 'clifford_ift_2d', 'clifford_ft_3d', 'clifford_ift_3d',
    'negate_frequency', 'spectral_product', 'phase_shift',
    'kernel_part', 'circular_convolve_direct', 'convolution_theorem',
]

#: ``(real blade, imaginary blade, sign of the imaginary blade)``
DUAL_PAIRS_2D = ((0, 3, 1), (1, 2, 1))

#: ``f2 + f31 i3`` with ``f31 = -f13`` in storage orientation
DUAL_PAIRS_3D = ((0, 7, 1), (1, 6, 1), (2, 5, -1), (3, 4, 1))


def dual_pairs(n):
    if n == 2:
        return DUAL_PAIRS_2D
    if n == 3:
        return DUAL_PAIRS_3D
    raise SignatureError('Clifford Fourier transforms need 2 or 3 basis vectors')


class CliffordSpectrum:
    """Per-mode multivector coefficients ``[blade, channel, frequency...]``.

    Coefficients are real: mode ``xi`` holds the multivector
    ``sum_x f(x) exp(-i_n 2 pi <x, xi> / N)``.
    """
    def __init__(self, signature, data):
        self.signature = Signature.parse(signature)
        self.data = np.asarray(data)
        if self.data.shape[0] != self.signature.blade_count:
            raise SignatureError('{} needs {} blades'.format(self.signature, self.signature.blade_count))

    @property
    def shape(self):
        return self.data.shape[2:]

    def pairs(self):
        """Complex view of the dual pairs, ``[pair, channel, frequency...]``."""
        return split_pairs(self.data, self.signature.n)

    @classmethod
    def from_pairs(cls, signature, z):
        signature = Signature.parse(signature)
        return cls(signature, merge_pairs(z, signature.n))

    def __repr__(self):
        return '<CliffordSpectrum {} modes={}>'.format(self.signature, self.shape)


def dft(g, axes, inverse=False):
    """Separable complex DFT over ``axes``."""
    g = np.asarray(g, dtype=np.complex128)
    if inverse:
        return np.fft.ifftn(g, axes=axes)
    return np.fft.fftn(g, axes=axes)


def dft_2d(g, inverse=False):
    """DFT over the last two axes of a complex grid."""
    return dft(g, (-2, -1), inverse)


def dft_3d(g, inverse=False):
    return dft(g, (-3, -2, -1), inverse)


def split_pairs(data, n, axis=0):
    """Form the complex dual pairs out of the blade axis."""
    data = np.moveaxis(np.asarray(data), axis, 0)
    z = [data[re] + 1j * sign * data[im] for re, im, sign in dual_pairs(n)]
    return np.moveaxis(np.stack(z), 0, axis)


def merge_pairs(z, n, axis=0):
    """Inverse of :func:`split_pairs`, imaginary parts must be representable."""
    z = np.moveaxis(np.asarray(z), axis, 0)
    pairs = dual_pairs(n)
    out = np.zeros((2 * len(pairs),) + z.shape[1:], dtype=z.real.dtype)
    for k, (re, im, sign) in enumerate(pairs):
        out[re] = z[k].real
        out[im] = sign * z[k].imag
    return np.moveaxis(out, 0, axis)


def _check_field(field, n):
    if field.signature.n != n:
        raise SignatureError('expected a field over G^{}, got {}'.format(n, field.signature))
    if field.spatial_ndim != n:
        raise ShapeError('expected {} spatial axes'.format(n))


def _forward(field, n):
    _check_field(field, n)
    axes = tuple(range(-n, 0))
    z = dft(split_pairs(field.data, n), axes)
    return CliffordSpectrum(field.signature, merge_pairs(z, n))


def _inverse(spectrum, n, spacing=None):
    axes = tuple(range(-n, 0))
    z = dft(split_pairs(spectrum.data, n), axes, inverse=True)
    return MultivectorField(spectrum.signature, merge_pairs(z, n), spacing)


def clifford_ft_2d(field):
    return _forward(field, 2)


def clifford_ift_2d(spectrum, spacing=None):
    if spectrum.signature.n != 2:
        raise SignatureError('expected a G^2 spectrum')
    return _inverse(spectrum, 2, spacing)


def clifford_ft_3d(field):
    return _forward(field, 3)


def clifford_ift_3d(spectrum, spacing=None):
    if spectrum.signature.n != 3:
        raise SignatureError('expected a G^3 spectrum')
    return _inverse(spectrum, 3, spacing)


def negate_frequency(data, ndim):
    """Map ``F(xi)`` to ``F(-xi)`` on the trailing ``ndim`` axes."""
    axes = tuple(range(-ndim, 0))
    return np.roll(np.flip(data, axis=axes), 1, axis=axes)


def spectral_product(a, b, signature):
    """Mode-wise geometric product of two spectra (or blade arrays)."""
    signature = Signature.parse(signature)
    a = a.data if isinstance(a, CliffordSpectrum) else a
    b = b.data if isinstance(b, CliffordSpectrum) else b
    return CliffordSpectrum(signature, np.stack(geometric_product(list(a), list(b), signature)))


def phase_shift(spectrum, offsets):
    """Spectrum of ``circular_shift(f, offsets)`` computed from that of ``f``.

    Every dual pair is multiplied by the complex phase
    ``exp(-i 2 pi <xi, t> / N)``.
    """
    shape = spectrum.shape
    phase = np.zeros(shape)
    for axis, (t, size) in enumerate(zip(offsets, shape)):
        k = np.arange(size).reshape([-1 if a == axis else 1 for a in range(len(shape))])
        phase = phase + k * t / size
    z = spectrum.pairs() * np.exp(-2j * np.pi * phase)
    return CliffordSpectrum.from_pairs(spectrum.signature, z)


_KIND_GRADES = {
    'spinor': (0, 2),
    'vector': (1,),
    'mixed': (0, 1, 2),
    'full': (0, 1, 2, 3),
}


def kernel_part(kernel, kind):
    """Project a kernel field onto the blades admitted by ``kind``."""
    if kind not in _KIND_GRADES:
        raise ValueError('unknown kernel kind: {!r}'.format(kind))
    grades = _KIND_GRADES[kind]
    masks = blade_masks(kernel.signature.n)
    data = np.array(kernel.data)
    for pos, mask in enumerate(masks):
        if grade(mask) not in grades:
            data[pos] = 0
    return kernel.with_data(data)


def circular_convolve_direct(field, kernel, kind='full'):
    """Direct periodic sum ``g(x) = sum_y f(y) k(y - x)``.

    ``kernel`` lives on the same grid as ``field`` and carries either one
    channel or one channel per field channel.
    """
    if kernel.signature != field.signature:
        raise SignatureError('kernel and field signatures differ')
    if kernel.spatial_shape != field.spatial_shape:
        raise ShapeError('kernel must be zero-padded to the field grid')
    kernel = kernel_part(kernel, kind)

    signature = field.signature
    shape = field.spatial_shape
    axes = tuple(range(2, 2 + len(shape)))
    out = np.zeros(field.data.shape, dtype=np.result_type(field.data, kernel.data))
    for z in np.ndindex(*shape):
        k = kernel.data[(slice(None), slice(None)) + z]
        k = k.reshape(k.shape + (1,) * len(shape))
        # f(x + z)
        shifted = np.roll(field.data, [-t for t in z], axis=axes)
        out += np.stack(geometric_product(list(shifted), list(k), signature))
    return field.with_data(out)


def convolution_theorem(field, kernel, kind='full'):
    """Spectrum of :func:`circular_convolve_direct` predicted in Fourier space.

    - spinor kernel (G^2), full kernel (G^3): ``F{f}(xi) F{k}(-xi)``
    - vector kernel (G^2): ``F{f}(-xi) F{k}(-xi)``
    - mixed kernel (G^2): sum of the two
    """
    n = field.signature.n
    forward = _forward
    kernel = kernel_part(kernel, kind)
    f_hat = forward(field, n).data
    if n == 3:
        if kind not in ('full', 'spinor', 'mixed'):
            raise ValueError('kind {!r} is not defined for G^3'.format(kind))
        k_hat = forward(kernel, n).data
        return spectral_product(f_hat, negate_frequency(k_hat, n), field.signature)

    spinor = forward(kernel_part(kernel, 'spinor'), n).data
    vector = forward(kernel_part(kernel, 'vector'), n).data
    total = spectral_product(f_hat, negate_frequency(spinor, n), field.signature).data
    total = total + spectral_product(
        negate_frequency(f_hat, n), negate_frequency(vector, n), field.signature).data
    return CliffordSpectrum(field.signature, total)
