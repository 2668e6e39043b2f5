"""
    cliffnet.oracle
    ~~~~~~~~~~~~~~~

    Slow reference implementations. Nothing here imports the production
    modules: blades are handled as index strings, convolutions are literal
    loops and the DFT is a direct sum.

    Signatures are plain ``(p, q)`` pairs and multivectors are sequences of
    blade coefficients in order of grade, then index.
"""

from itertools import combinations
import numpy as np

__all__ = [
    'oracle_blades', 'symbolic_blade_product', 'oracle_gp',
    'oracle_conv', 'oracle_dft', 'oracle_clifford_ft',
    'oracle_spectral_conv', 'oracle_quaternion_product',
    'oracle_quaternion_rotate', 'oracle_inv_sqrtm',
]


def oracle_blades(n):
    """Blade index strings, e.g. ``['', '1', '2', '12']`` for n = 2."""
    digits = ''.join(str(i + 1) for i in range(n))
    out = []
    for k in range(n + 1):
        out.extend(''.join(c) for c in combinations(digits, k))
    return out


def _multiply_strings(a, b, p):
    """Multiply two blade strings by bubble-sorting the index list."""
    word = list(a + b)
    sign = 1
    changed = True
    while changed:
        changed = False
        for i in range(len(word) - 1):
            if word[i] > word[i + 1]:
                word[i], word[i + 1] = word[i + 1], word[i]
                sign = -sign
                changed = True

    out = []
    i = 0
    while i < len(word):
        if i + 1 < len(word) and word[i] == word[i + 1]:
            if int(word[i]) > p:
                sign = -sign
            i += 2
        else:
            out.append(word[i])
            i += 1
    return ''.join(out), sign


def symbolic_blade_product(signature):
    """List of ``(i, j, result, sign)`` for every pair of blade positions."""
    p, q = signature
    blades = oracle_blades(p + q)
    lookup = {b: k for k, b in enumerate(blades)}
    rows = []
    for i, a in enumerate(blades):
        for j, b in enumerate(blades):
            result, sign = _multiply_strings(a, b, p)
            rows.append((i, j, lookup[result], sign))
    return rows


_products = {}


def oracle_gp(signature, a, b):
    p, q = signature
    key = (p, q)
    if key not in _products:
        _products[key] = symbolic_blade_product(key)
    out = [0.0] * (1 << (p + q))
    for i, j, r, sign in _products[key]:
        out[r] = out[r] + sign * a[i] * b[j]
    return out


def oracle_conv(signature, f, kernel, padding='periodic', stride=1):
    """Literal Clifford cross-correlation.

    :param f: ``[blade, c_in, spatial...]``
    :param kernel: ``[blade, c_out, c_in, k...]`` with odd extents
    """
    f = np.asarray(f, dtype=np.float64)
    kernel = np.asarray(kernel, dtype=np.float64)
    blades = f.shape[0]
    c_in = f.shape[1]
    shape = f.shape[2:]
    c_out = kernel.shape[1]
    ksize = kernel.shape[3:]
    half = [k // 2 for k in ksize]
    out_shape = tuple(-(-s // stride) for s in shape)
    out = np.zeros((blades, c_out) + out_shape)

    for x in np.ndindex(*out_shape):
        for o in range(c_out):
            acc = [0.0] * blades
            for u in np.ndindex(*ksize):
                src = []
                inside = True
                for axis in range(len(shape)):
                    pos = x[axis] * stride + u[axis] - half[axis]
                    if padding == 'periodic':
                        pos %= shape[axis]
                    elif pos < 0 or pos >= shape[axis]:
                        inside = False
                    src.append(pos)
                if not inside:
                    continue
                for c in range(c_in):
                    a = [f[(b, c) + tuple(src)] for b in range(blades)]
                    w = [kernel[(b, o, c) + u] for b in range(blades)]
                    prod = oracle_gp(signature, a, w)
                    acc = [s + t for s, t in zip(acc, prod)]
            for b in range(blades):
                out[(b, o) + x] = acc[b]
    return out


def oracle_dft(g, inverse=False):
    """Direct sum over every grid point for every mode of ``g[..., spatial]``.

    The spatial axes are all axes of ``g``.
    """
    g = np.asarray(g, dtype=np.complex128)
    shape = g.shape
    points = np.indices(shape).reshape(len(shape), -1)
    values = g.reshape(-1)
    sign = 1.0 if inverse else -1.0
    out = np.zeros(shape, dtype=np.complex128)
    for k in np.ndindex(*shape):
        phase = sum(k[a] * points[a] / shape[a] for a in range(len(shape)))
        out[k] = np.sum(values * np.exp(sign * 2j * np.pi * phase))
    if inverse:
        out /= values.size
    return out


def oracle_clifford_ft(signature, f):
    """``F(xi) = sum_x f(x) (cos t - i_n sin t)`` evaluated with :func:`oracle_gp`.

    :param f: ``[blade, spatial...]``
    """
    p, q = signature
    f = np.asarray(f, dtype=np.float64)
    blades = f.shape[0]
    shape = f.shape[1:]
    points = np.indices(shape).reshape(len(shape), -1)
    flat = f.reshape(blades, -1)
    out = np.zeros(f.shape)
    for k in np.ndindex(*shape):
        theta = 2 * np.pi * sum(k[a] * points[a] / shape[a] for a in range(len(shape)))
        rotor = [np.zeros_like(theta) for _ in range(blades)]
        rotor[0] = np.cos(theta)
        rotor[-1] = -np.sin(theta)
        prod = oracle_gp((p, q), list(flat), rotor)
        for b in range(blades):
            out[(b,) + k] = np.sum(prod[b])
    return out


def oracle_spectral_conv(signature, f, weights, modes):
    """Full-spectrum reference of the Clifford Fourier layer.

    Every blade is transformed on its own with a commuting imaginary unit,
    each retained mode is multiplied by a complex-coefficient multivector
    and the result is the real part of the inverse transform.

    :param f: ``[blade, c_in, spatial...]``
    :param weights: ``[2, blade, c_in, c_out, 2*m...]`` real and imaginary
        parts over the corner blocks
    """
    f = np.asarray(f, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    w = weights[0] + 1j * weights[1]
    blades, c_in = f.shape[:2]
    shape = f.shape[2:]
    c_out = w.shape[2]
    spectra = np.stack([[oracle_dft(f[b, c]) for c in range(c_in)] for b in range(blades)])

    out_hat = np.zeros((blades, c_out) + shape, dtype=np.complex128)
    for xi in np.ndindex(*shape):
        widx = []
        for axis, k in enumerate(xi):
            m = modes[axis]
            if k < m:
                widx.append(k)
            elif k >= shape[axis] - m:
                widx.append(2 * m - (shape[axis] - k))
            else:
                widx = None
                break
        if widx is None:
            continue
        for o in range(c_out):
            acc = [0.0] * blades
            for c in range(c_in):
                a = [spectra[(b, c) + xi] for b in range(blades)]
                v = [w[(b, c, o) + tuple(widx)] for b in range(blades)]
                acc = [s + t for s, t in zip(acc, oracle_gp(signature, a, v))]
            for b in range(blades):
                out_hat[(b, o) + xi] = acc[b]

    out = np.zeros(out_hat.shape)
    for b in range(blades):
        for o in range(c_out):
            out[b, o] = oracle_dft(out_hat[b, o], inverse=True).real
    return out


def oracle_quaternion_product(a, b):
    """Hamilton product from the rules ``i^2 = j^2 = k^2 = ijk = -1``."""
    # unit products of (1, i, j, k) as (sign, index)
    rules = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }
    out = [0.0] * 4
    for (i, j), (sign, r) in rules.items():
        out[r] += sign * a[i] * b[j]
    return out


def oracle_quaternion_rotate(q, v):
    """Vector part of ``q v q^-1`` for a pure quaternion ``v``."""
    norm2 = sum(c * c for c in q)
    inverse = [q[0] / norm2, -q[1] / norm2, -q[2] / norm2, -q[3] / norm2]
    pure = [0.0, v[0], v[1], v[2]]
    out = oracle_quaternion_product(oracle_quaternion_product(q, pure), inverse)
    return out[1:]


def oracle_inv_sqrtm(matrix, iterations=60):
    """Inverse square root by Denman-Beavers iteration."""
    y = np.array(matrix, dtype=np.float64)
    z = np.eye(len(y))
    for _ in range(iterations):
        y_inv = np.linalg.inv(y)
        z_inv = np.linalg.inv(z)
        y, z = 0.5 * (y + z_inv), 0.5 * (z + y_inv)
    return z
