"""
    cliffnet.algebra
    ~~~~~~~~~~~~~~~~

    Clifford algebra signatures, blade bookkeeping and geometric products.

    Multivectors are dense coefficient records in the canonical blade
    order ``[1, e1, e2, (e3), e1e2, (e1e3), (e2e3), (e1e2e3)]``. Every
    coefficient may be a float, a complex number or a numpy array, the
    products work elementwise on whatever they are given.
"""

from typing import NamedTuple, Any
import numpy as np
from .errors import SignatureError

__all__ = [
    'Signature', 'CL01', 'CL20', 'CL02', 'CL30',
    'BladeTable', 'build_blade_table', 'blade_masks', 'blade_names',
    'grade', 'Multivector2', 'Multivector3', 'Quaternion',
    'geometric_product_2d', 'geometric_product_3d', 'table_product',
    'dual', 'reverse', 'grade_projection', 'vector_inner_wedge',
    'quaternion_product', 'quaternion_rotation_matrix',
    'rotation_matrix_entries', 'mixing_tensor', 'clifford_kernel_matrix',
]

QUATERNION_EPSILON = 1e-12


class Signature:
    """The pair ``(p, q)``: ``p`` basis vectors square to +1, ``q`` to -1.

    Only ``1 <= p + q <= 3`` is supported.
    """
    __slots__ = ('p', 'q')

    def __init__(self, p, q=0):
        p = int(p)
        q = int(q)
        if p < 0 or q < 0 or not 1 <= p + q <= 3:
            raise SignatureError('unsupported signature ({}, {})'.format(p, q))
        self.p = p
        self.q = q

    @property
    def n(self):
        return self.p + self.q

    @property
    def blade_count(self):
        return 1 << self.n

    def square(self, k):
        """Square of the basis vector ``e_{k+1}``."""
        return 1 if k < self.p else -1

    @classmethod
    def parse(cls, value):
        """Accept a Signature, a ``(p, q)`` pair or a ``"p,q"`` string."""
        if isinstance(value, cls):
            return value
        if isinstance(value, str):
            value = value.lower().replace('cl', '').replace('(', '').replace(')', '')
            parts = [v for v in value.replace(',', ' ').split() if v]
            if len(parts) == 1 and len(parts[0]) == 2:
                parts = list(parts[0])
            value = parts
        p, q = value
        return cls(p, q)

    def __iter__(self):
        yield self.p
        yield self.q

    def __eq__(self, other):
        if isinstance(other, Signature):
            return self.p == other.p and self.q == other.q
        if isinstance(other, tuple):
            return (self.p, self.q) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.q))

    def __repr__(self):
        return 'Signature({}, {})'.format(self.p, self.q)

    def __str__(self):
        return 'Cl({},{})'.format(self.p, self.q)


CL01 = Signature(0, 1)
CL20 = Signature(2, 0)
CL02 = Signature(0, 2)
CL30 = Signature(3, 0)


def grade(mask):
    return bin(mask).count('1')


def blade_masks(n):
    """Blade bit masks in canonical order: by grade, then by indices."""
    def key(mask):
        return grade(mask), [i for i in range(n) if mask >> i & 1]
    return sorted(range(1 << n), key=key)


def blade_names(n):
    names = []
    for mask in blade_masks(n):
        if mask == 0:
            names.append('1')
        else:
            names.append('e' + ''.join(str(i + 1) for i in range(n) if mask >> i & 1))
    return names


def _reorder_sign(a, b):
    # transpositions needed to sort the concatenated index list
    swaps = 0
    a >>= 1
    while a:
        swaps += grade(a & b)
        a >>= 1
    return -1 if swaps & 1 else 1


class BladeTable:
    """Multiplication table of the basis blades of one signature.

    ``index[i, j]`` is the position of the product blade and ``sign[i, j]``
    its sign, both in canonical blade order.
    """
    def __init__(self, signature, index, sign):
        self.signature = signature
        self.index = index
        self.sign = sign
        self.index.setflags(write=False)
        self.sign.setflags(write=False)

    @property
    def size(self):
        return len(self.index)

    def entry(self, i, j):
        return int(self.index[i, j]), int(self.sign[i, j])

    def __repr__(self):
        return '<BladeTable {}>'.format(self.signature)


_table_cache = {}


def build_blade_table(signature):
    signature = Signature.parse(signature)
    table = _table_cache.get(signature)
    if table is not None:
        return table

    n = signature.n
    masks = blade_masks(n)
    position = {m: i for i, m in enumerate(masks)}
    size = len(masks)
    index = np.zeros((size, size), dtype=np.int64)
    sign = np.zeros((size, size), dtype=np.int64)
    for i, a in enumerate(masks):
        for j, b in enumerate(masks):
            s = _reorder_sign(a, b)
            common = a & b
            for k in range(n):
                if common >> k & 1:
                    s *= signature.square(k)
            index[i, j] = position[a ^ b]
            sign[i, j] = s

    table = BladeTable(signature, index, sign)
    _table_cache[signature] = table
    return table


def table_product(table, a, b):
    """Geometric product driven by a :class:`BladeTable`.

    ``a`` and ``b`` are sequences of blade coefficients (or arrays whose
    first axis is the blade axis); the result is a list in blade order.
    """
    size = table.size
    if len(a) != size or len(b) != size:
        raise SignatureError('expected {} blades for {}'.format(size, table.signature))
    out = [0] * size
    for i in range(size):
        for j in range(size):
            r = table.index[i, j]
            if table.sign[i, j] > 0:
                out[r] = out[r] + a[i] * b[j]
            else:
                out[r] = out[r] - a[i] * b[j]
    return out


def mixing_tensor(signature):
    """``M[r, i, j]`` such that ``(a b)_r = sum_ij M[r, i, j] a_i b_j``."""
    table = build_blade_table(signature)
    size = table.size
    m = np.zeros((size, size, size))
    for i in range(size):
        for j in range(size):
            m[table.index[i, j], i, j] = table.sign[i, j]
    return m


def clifford_kernel_matrix(weights, signature):
    """Blade-mixing kernel matrix ``K[r][i]`` of a multivector kernel.

    For Cl(2,0) this is exactly::

        [[W0,  W1,  W2, -W3],
         [W1,  W0, -W3,  W2],
         [W2,  W3,  W0, -W1],
         [W3,  W2, -W1,  W0]]

    so that ``f w`` equals ``K @ f`` for the kernel ``w`` on the right.
    """
    m = mixing_tensor(signature)
    size = len(m)
    rows = []
    for r in range(size):
        row = []
        for i in range(size):
            entry = 0
            for j in range(size):
                if m[r, i, j] > 0:
                    entry = entry + weights[j]
                elif m[r, i, j] < 0:
                    entry = entry - weights[j]
            row.append(entry)
        rows.append(row)
    return rows


class Multivector2(NamedTuple):
    a0: Any = 0.0
    a1: Any = 0.0
    a2: Any = 0.0
    a12: Any = 0.0


class Multivector3(NamedTuple):
    a0: Any = 0.0
    a1: Any = 0.0
    a2: Any = 0.0
    a3: Any = 0.0
    a12: Any = 0.0
    a13: Any = 0.0
    a23: Any = 0.0
    a123: Any = 0.0


class Quaternion(NamedTuple):
    w0: Any = 0.0
    w1: Any = 0.0
    w2: Any = 0.0
    w3: Any = 0.0

    def conjugate(self):
        return Quaternion(self.w0, -self.w1, -self.w2, -self.w3)

    def norm(self):
        return np.sqrt(self.w0 ** 2 + self.w1 ** 2 + self.w2 ** 2 + self.w3 ** 2)

    def normalized(self):
        n = self.norm()
        return Quaternion(self.w0 / n, self.w1 / n, self.w2 / n, self.w3 / n)

    def inverse(self):
        n2 = self.w0 ** 2 + self.w1 ** 2 + self.w2 ** 2 + self.w3 ** 2
        c = self.conjugate()
        return Quaternion(c.w0 / n2, c.w1 / n2, c.w2 / n2, c.w3 / n2)


def geometric_product_2d(a, b, signature=CL20):
    """Closed-form product of two G^2 multivectors for Cl(2,0) or Cl(0,2)."""
    a0, a1, a2, a12 = a
    b0, b1, b2, b12 = b
    signature = Signature.parse(signature)
    if signature == CL20:
        return Multivector2(
            a0 * b0 + a1 * b1 + a2 * b2 - a12 * b12,
            a0 * b1 + a1 * b0 - a2 * b12 + a12 * b2,
            a0 * b2 + a1 * b12 + a2 * b0 - a12 * b1,
            a0 * b12 + a1 * b2 - a2 * b1 + a12 * b0,
        )
    if signature == CL02:
        return Multivector2(
            a0 * b0 - a1 * b1 - a2 * b2 - a12 * b12,
            a0 * b1 + a1 * b0 + a2 * b12 - a12 * b2,
            a0 * b2 - a1 * b12 + a2 * b0 + a12 * b1,
            a0 * b12 + a1 * b2 - a2 * b1 + a12 * b0,
        )
    raise SignatureError('geometric_product_2d supports Cl(2,0) and Cl(0,2), got ' + str(signature))


def geometric_product_3d(a, b):
    """Closed-form product of two Cl(3,0) multivectors."""
    a0, a1, a2, a3, a12, a13, a23, a123 = a
    b0, b1, b2, b3, b12, b13, b23, b123 = b
    return Multivector3(
        a0 * b0 + a1 * b1 + a2 * b2 + a3 * b3
        - a12 * b12 - a13 * b13 - a23 * b23 - a123 * b123,

        a0 * b1 + a1 * b0 - a2 * b12 + a12 * b2
        - a3 * b13 + a13 * b3 - a23 * b123 - a123 * b23,

        a0 * b2 + a2 * b0 + a1 * b12 - a12 * b1
        - a3 * b23 + a23 * b3 + a13 * b123 + a123 * b13,

        a0 * b3 + a3 * b0 + a1 * b13 - a13 * b1
        + a2 * b23 - a23 * b2 - a12 * b123 - a123 * b12,

        a0 * b12 + a12 * b0 + a1 * b2 - a2 * b1
        + a3 * b123 + a123 * b3 - a13 * b23 + a23 * b13,

        a0 * b13 + a13 * b0 + a1 * b3 - a3 * b1
        - a2 * b123 - a123 * b2 + a12 * b23 - a23 * b12,

        a0 * b23 + a23 * b0 + a2 * b3 - a3 * b2
        + a1 * b123 + a123 * b1 - a12 * b13 + a13 * b12,

        a0 * b123 + a123 * b0 + a1 * b23 + a23 * b1
        - a2 * b13 - a13 * b2 + a3 * b12 + a12 * b3,
    )


def pseudoscalar(signature):
    signature = Signature.parse(signature)
    out = [0.0] * signature.blade_count
    out[-1] = 1.0
    return out


def geometric_product(a, b, signature):
    """Dispatch to the specialized product when there is one."""
    signature = Signature.parse(signature)
    if signature in (CL20, CL02):
        return list(geometric_product_2d(a, b, signature))
    if signature == CL30:
        return list(geometric_product_3d(a, b))
    return table_product(build_blade_table(signature), a, b)


def dual(a, signature):
    """Right-multiplication by the pseudoscalar, ``a* = a i_n``."""
    signature = Signature.parse(signature)
    if len(a) != signature.blade_count:
        raise SignatureError('expected {} blades for {}'.format(signature.blade_count, signature))
    out = geometric_product(a, pseudoscalar(signature), signature)
    if signature.n == 2:
        return Multivector2(*out)
    if signature.n == 3:
        return Multivector3(*out)
    return out


def reverse(a, n):
    """Reverse the order of basis vectors in every blade."""
    out = []
    for coef, mask in zip(a, blade_masks(n)):
        k = grade(mask)
        out.append(-coef if (k * (k - 1) // 2) & 1 else coef)
    return out


def grade_projection(a, n, k):
    return [coef if grade(mask) == k else 0 * coef for coef, mask in zip(a, blade_masks(n))]


def vector_inner_wedge(x, y):
    """Split the product of two 2-vectors into its inner and wedge part."""
    x1, x2 = x
    y1, y2 = y
    return x1 * y1 + x2 * y2, x1 * y2 - x2 * y1


def quaternion_product(a, b):
    """Hamilton product."""
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return Quaternion(
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )


def rotation_matrix_entries(w0, w1, w2, w3, epsilon=QUATERNION_EPSILON):
    """Rows of the rotation matrix built from the filter normalized by
    ``sqrt(|w|^2 + epsilon)``.

    Works on anything with arithmetic operators: floats, arrays, or
    :class:`cliffnet.autodiff.Tensor`. Rows and columns run over the
    ``(e1, e2, e1e2)`` slots.
    """
    sumsq = w0 * w0 + w1 * w1 + w2 * w2 + w3 * w3 + epsilon
    s = 2.0 / sumsq
    return [
        [1.0 - (w2 * w2 + w3 * w3) * s, (w1 * w2 - w0 * w3) * s, (w1 * w3 + w0 * w2) * s],
        [(w1 * w2 + w0 * w3) * s, 1.0 - (w1 * w1 + w3 * w3) * s, (w2 * w3 - w0 * w1) * s],
        [(w1 * w3 - w0 * w2) * s, (w2 * w3 + w0 * w1) * s, 1.0 - (w1 * w1 + w2 * w2) * s],
    ]


def quaternion_rotation_matrix(q, epsilon=QUATERNION_EPSILON):
    w0, w1, w2, w3 = (float(v) for v in q)
    if w0 * w0 + w1 * w1 + w2 * w2 + w3 * w3 + epsilon <= 0:
        raise ValueError('cannot normalize a zero quaternion without epsilon')
    return np.array(rotation_matrix_entries(w0, w1, w2, w3, epsilon), dtype=np.float64)
