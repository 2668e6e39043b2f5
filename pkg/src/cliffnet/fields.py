"""
    cliffnet.fields
    ~~~~~~~~~~~~~~~

    Multivector fields on regular grids. The data layout is blade-major,
    ``[blade, channel, spatial...]``, so every blade plane is an ordinary
    real tensor.
"""

import numpy as np
from .algebra import Signature, blade_names, blade_masks, grade
from .errors import SignatureError, ShapeError, PackingError, NumericalError

__all__ = [
    'MultivectorField', 'FieldPacking',
    'ADVECTION_PACKING', 'MAXWELL_PACKING',
    'pack', 'unpack', 'circular_shift', 'pad_periodic', 'zero_pad',
]


class MultivectorField:
    """A grid of multivector channels.

    :param signature: Signature of the algebra, decides the blade count
    :param data: array with axes ``[blade, channel, spatial...]``
    :param spacing: physical grid spacing per spatial axis (metadata)
    """
    def __init__(self, signature, data, spacing=None):
        signature = Signature.parse(signature)
        data = np.array(data, copy=True)
        if not np.issubdtype(data.dtype, np.floating):
            data = data.astype(np.float64)

        if data.ndim not in (4, 5):
            raise ShapeError('expected [blade, channel, spatial...] with 2 or 3 spatial axes')
        if data.shape[0] != signature.blade_count:
            raise SignatureError('{} needs {} blades, got {}'.format(
                signature, signature.blade_count, data.shape[0]))
        if min(data.shape[1:]) < 1:
            raise ShapeError('empty channel or spatial axis')
        if not np.isfinite(data).all():
            raise NumericalError('multivector field holds non-finite values')

        if spacing is None:
            spacing = (1.0,) * (data.ndim - 2)
        spacing = tuple(float(s) for s in spacing)
        if len(spacing) != data.ndim - 2:
            raise ShapeError('one spacing value per spatial axis expected')

        data.setflags(write=False)
        self.signature = signature
        self.data = data
        self.spacing = spacing

    @property
    def blades(self):
        return self.data.shape[0]

    @property
    def channels(self):
        return self.data.shape[1]

    @property
    def spatial_shape(self):
        return self.data.shape[2:]

    @property
    def spatial_ndim(self):
        return self.data.ndim - 2

    @property
    def dtype(self):
        return self.data.dtype

    def blade(self, name):
        """Return one blade plane ``[channel, spatial...]`` by index or name."""
        if isinstance(name, str):
            name = blade_names(self.signature.n).index(name)
        return self.data[name]

    def with_data(self, data):
        return self.__class__(self.signature, data, self.spacing)

    def astype(self, dtype):
        return self.with_data(self.data.astype(dtype))

    def _check_compatible(self, other):
        if other.signature != self.signature:
            raise SignatureError('signature mismatch: {} vs {}'.format(self.signature, other.signature))
        if other.data.shape != self.data.shape:
            raise ShapeError('shape mismatch: {} vs {}'.format(self.data.shape, other.data.shape))

    def __add__(self, other):
        self._check_compatible(other)
        return self.with_data(self.data + other.data)

    def __sub__(self, other):
        self._check_compatible(other)
        return self.with_data(self.data - other.data)

    def __mul__(self, scale):
        return self.with_data(self.data * scale)

    __rmul__ = __mul__

    def __neg__(self):
        return self.with_data(-self.data)

    def __repr__(self):
        return '<MultivectorField {} channels={} grid={}>'.format(
            self.signature, self.channels, 'x'.join(str(s) for s in self.spatial_shape))

    @classmethod
    def zeros(cls, signature, channels, shape, spacing=None, dtype=np.float64):
        signature = Signature.parse(signature)
        data = np.zeros((signature.blade_count, channels) + tuple(shape), dtype=dtype)
        return cls(signature, data, spacing)


def _parse_blade(name, n):
    """Map a blade name such as ``e31`` to ``(position, sign)``."""
    if name in ('1', 'e0', 'scalar', ''):
        return 0, 1
    if not name.startswith('e'):
        raise PackingError('invalid blade name: ' + name)
    indices = [int(c) - 1 for c in name[1:]]
    if len(set(indices)) != len(indices) or any(i < 0 or i >= n for i in indices):
        raise PackingError('invalid blade name {} for {} basis vectors'.format(name, n))

    swaps = 0
    for i in range(len(indices)):
        for j in range(i + 1, len(indices)):
            if indices[i] > indices[j]:
                swaps += 1
    mask = 0
    for i in indices:
        mask |= 1 << i
    position = blade_masks(n).index(mask)
    return position, -1 if swaps & 1 else 1


class FieldPacking:
    """Assign named physical fields to blade slots.

    Blade names may use any orientation, ``e31`` stores the negated value
    in the canonical ``e1e3`` slot::

        FieldPacking({'scalar': '1', 'velocity_x': 'e1', 'velocity_y': 'e2'})
    """
    def __init__(self, mapping):
        self.mapping = dict(mapping)

    def resolve(self, signature):
        """Return ``{name: (blade_position, sign)}`` and check injectivity."""
        signature = Signature.parse(signature)
        resolved = {}
        used = {}
        for name, blade in self.mapping.items():
            position, sign = _parse_blade(blade, signature.n)
            if position in used:
                raise PackingError('fields {!r} and {!r} share blade {}'.format(
                    used[position], name, blade))
            used[position] = name
            resolved[name] = (position, sign)
        return resolved

    def names(self):
        return list(self.mapping)

    def blades_of_grade(self, signature, k):
        """Positions of the mapped blades with grade ``k``."""
        signature = Signature.parse(signature)
        masks = blade_masks(signature.n)
        return sorted(
            pos for pos, _ in self.resolve(signature).values()
            if grade(masks[pos]) == k
        )

    def mapped_blades(self, signature):
        return sorted(pos for pos, _ in self.resolve(signature).values())

    def to_dict(self):
        return dict(self.mapping)

    @classmethod
    def from_dict(cls, data):
        return cls(data)

    def __eq__(self, other):
        return isinstance(other, FieldPacking) and self.mapping == other.mapping

    def __repr__(self):
        return 'FieldPacking({!r})'.format(self.mapping)


ADVECTION_PACKING = FieldPacking({
    'scalar': '1',
    'velocity_x': 'e1',
    'velocity_y': 'e2',
})

# F = D + H i3
MAXWELL_PACKING = FieldPacking({
    'electric_x': 'e1',
    'electric_y': 'e2',
    'electric_z': 'e3',
    'magnetic_x': 'e23',
    'magnetic_y': 'e31',
    'magnetic_z': 'e12',
})


def pack(fields, packing, signature, spacing=None, shape=None, dtype=None):
    """Group named real grids into one multivector field.

    Each grid is either ``[spatial...]`` or ``[channel, spatial...]``; a
    G^2 field lives on a 2D grid and a G^3 field on a 3D grid. Blades
    without a field stay exactly zero.
    """
    signature = Signature.parse(signature)
    resolved = packing.resolve(signature)
    ndim = signature.n

    grids = {}
    for name, grid in fields.items():
        if name not in resolved:
            raise PackingError('field {!r} is not part of the packing'.format(name))
        grid = np.asarray(grid)
        if grid.ndim == ndim:
            grid = grid[np.newaxis]
        if grid.ndim != ndim + 1:
            raise ShapeError('field {!r} has {} axes'.format(name, grid.ndim))
        grids[name] = grid

    shapes = {g.shape for g in grids.values()}
    if len(shapes) > 1:
        raise ShapeError('fields do not share one shape: {}'.format(sorted(shapes)))
    if shapes:
        full_shape = shapes.pop()
    elif shape is not None:
        shape = tuple(shape)
        full_shape = shape if len(shape) == ndim + 1 else (1,) + shape
    else:
        raise ShapeError('shape is required to pack an empty set of fields')

    if dtype is None:
        dtypes = [g.dtype for g in grids.values() if np.issubdtype(g.dtype, np.floating)]
        dtype = np.result_type(*dtypes) if dtypes else np.float64

    data = np.zeros((signature.blade_count,) + full_shape, dtype=dtype)
    for name, grid in grids.items():
        position, sign = resolved[name]
        data[position] = grid if sign > 0 else -grid
    return MultivectorField(signature, data, spacing)


def unpack(field, packing, squeeze=True):
    """Inverse of :func:`pack` on the mapped blades.

    Single-channel grids come back as ``[spatial...]`` unless
    ``squeeze=False``.
    """
    resolved = packing.resolve(field.signature)
    out = {}
    for name, (position, sign) in resolved.items():
        grid = field.data[position]
        grid = grid.copy() if sign > 0 else -grid
        if squeeze and grid.shape[0] == 1:
            grid = grid[0]
        out[name] = grid
    return out


def _spatial_param(value, ndim, name):
    if np.isscalar(value):
        return (int(value),) * ndim
    value = tuple(int(v) for v in value)
    if len(value) != ndim:
        raise ShapeError('{} needs one value per spatial axis'.format(name))
    return value


def circular_shift(field, offsets):
    """Periodic shift ``(L_t f)(x) = f(x - t)`` along the spatial axes."""
    offsets = _spatial_param(offsets, field.spatial_ndim, 'offsets')
    axes = tuple(range(2, 2 + field.spatial_ndim))
    return field.with_data(np.roll(field.data, offsets, axis=axes))


def _pad(field, margin, mode):
    margin = _spatial_param(margin, field.spatial_ndim, 'margin')
    if any(m < 0 for m in margin):
        raise ShapeError('margin must be non-negative')
    widths = [(0, 0), (0, 0)] + [(m, m) for m in margin]
    return np.pad(field.data, widths, mode=mode)


def pad_periodic(field, margin):
    """Extend the spatial axes by wrap-around copies of the grid."""
    data = _pad(field, margin, 'wrap')
    return MultivectorField(field.signature, data, field.spacing)


def zero_pad(field, margin):
    data = _pad(field, margin, 'constant')
    return MultivectorField(field.signature, data, field.spacing)
