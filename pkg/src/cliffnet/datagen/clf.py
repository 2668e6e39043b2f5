"""
    cliffnet.datagen.clf
    ~~~~~~~~~~~~~~~~~~~~

    Trajectory datasets and the CLF1 container::

        b"CLF1"
        u32 little-endian length of the header
        UTF-8 JSON header: shape, dtype (f32 | f64), dt, dx, signature,
                           packing, provenance
        little-endian row-major payload,
        axes [trajectory, time, blade, channel, spatial...]
"""

import json
import struct
import numpy as np
from ..algebra import Signature
from ..fields import FieldPacking, MultivectorField
from ..errors import (
    ShapeError, NumericalError, BadMagicError, TruncatedPayloadError,
    HeaderMismatchError,
)

__all__ = [
    'MAGIC', 'TrajectorySet', 'write_clf', 'read_clf', 'read_clf_header',
]

MAGIC = b'CLF1'

_DTYPES = {'f32': '<f4', 'f64': '<f8'}


def _dtype_name(dtype):
    dtype = np.dtype(dtype)
    if dtype == np.float32:
        return 'f32'
    if dtype == np.float64:
        return 'f64'
    raise ValueError('CLF1 stores f32 or f64, not {}'.format(dtype))


class TrajectorySet:
    """Time-indexed multivector fields of several trajectories.

    :param data: ``[trajectory, time, blade, channel, spatial...]``
    :param dt: time between stored steps
    :param dx: grid spacing per spatial axis
    :param provenance: generator name, parameters and seed
    """
    def __init__(self, data, dt, dx, signature, packing, provenance=None):
        signature = Signature.parse(signature)
        data = np.asarray(data)
        if data.ndim not in (6, 7):
            raise ShapeError('expected [trajectory, time, blade, channel, spatial...]')
        if data.shape[2] != signature.blade_count:
            raise ShapeError('{} needs {} blades, data has {}'.format(
                signature, signature.blade_count, data.shape[2]))
        if not np.all(np.isfinite(data)):
            raise NumericalError('trajectory data holds non-finite values')
        if np.isscalar(dx):
            dx = (dx,) * (data.ndim - 4)
        if not isinstance(packing, FieldPacking):
            packing = FieldPacking(packing)
        packing.resolve(signature)

        self.data = data
        self.dt = float(dt)
        self.dx = tuple(float(v) for v in dx)
        self.signature = signature
        self.packing = packing
        self.provenance = dict(provenance or {})

    @property
    def trajectories(self):
        return self.data.shape[0]

    @property
    def steps(self):
        return self.data.shape[1]

    @property
    def channels(self):
        return self.data.shape[3]

    @property
    def spatial_shape(self):
        return self.data.shape[4:]

    @property
    def dtype(self):
        return self.data.dtype

    def field(self, trajectory, step):
        return MultivectorField(self.signature, self.data[trajectory, step], self.dx)

    def subset(self, indices):
        return self.__class__(self.data[list(indices)], self.dt, self.dx, self.signature,
                              self.packing, self.provenance)

    def astype(self, dtype):
        return self.__class__(self.data.astype(dtype), self.dt, self.dx, self.signature,
                              self.packing, self.provenance)

    def header(self, dtype=None):
        return {
            'shape': list(self.data.shape),
            'dtype': _dtype_name(self.data.dtype if dtype is None else dtype),
            'dt': self.dt,
            'dx': list(self.dx),
            'signature': [self.signature.p, self.signature.q],
            'packing': self.packing.to_dict(),
            'provenance': self.provenance,
        }

    def __repr__(self):
        return '<TrajectorySet {} trajectories={} steps={} grid={}>'.format(
            self.signature, self.trajectories, self.steps,
            'x'.join(str(s) for s in self.spatial_shape))


def write_clf(path, trajectories, dtype=None):
    """Write a :class:`TrajectorySet`; ``dtype`` defaults to the data's."""
    header = trajectories.header(dtype)
    payload = np.ascontiguousarray(trajectories.data, dtype=_DTYPES[header['dtype']])
    encoded = json.dumps(header, sort_keys=True).encode('utf-8')
    with open(path, 'wb') as f:
        f.write(MAGIC)
        f.write(struct.pack('<I', len(encoded)))
        f.write(encoded)
        f.write(payload.tobytes())


def _read_header(f):
    magic = f.read(4)
    if magic != MAGIC:
        raise BadMagicError('not a CLF1 file (magic {!r})'.format(magic))
    raw = f.read(4)
    if len(raw) != 4:
        raise TruncatedPayloadError('file ends inside the header length')
    length, = struct.unpack('<I', raw)
    encoded = f.read(length)
    if len(encoded) != length:
        raise TruncatedPayloadError('file ends inside the header')
    try:
        header = json.loads(encoded.decode('utf-8'))
    except ValueError as e:
        raise HeaderMismatchError('header is not valid JSON: {}'.format(e))

    for key in ('shape', 'dtype', 'dt', 'dx', 'signature', 'packing'):
        if key not in header:
            raise HeaderMismatchError('header lacks ' + key)
    if header['dtype'] not in _DTYPES:
        raise HeaderMismatchError('unsupported dtype {!r}'.format(header['dtype']))
    shape = header['shape']
    if len(shape) not in (6, 7) or any(int(s) < 1 for s in shape):
        raise HeaderMismatchError('invalid shape {}'.format(shape))
    if len(header['dx']) != len(shape) - 4:
        raise HeaderMismatchError('dx does not match the spatial rank')
    try:
        signature = Signature.parse(header['signature'])
    except ValueError as e:
        raise HeaderMismatchError(str(e))
    if shape[2] != signature.blade_count:
        raise HeaderMismatchError('shape has {} blades, {} needs {}'.format(
            shape[2], signature, signature.blade_count))
    return header


def read_clf_header(path):
    """Return the JSON header without loading the payload."""
    with open(path, 'rb') as f:
        return _read_header(f)


def read_clf(path):
    with open(path, 'rb') as f:
        header = _read_header(f)
        dtype = np.dtype(_DTYPES[header['dtype']])
        shape = tuple(header['shape'])
        expected = int(np.prod(shape, dtype=np.int64)) * dtype.itemsize
        payload = f.read(expected)
        if len(payload) < expected:
            raise TruncatedPayloadError('payload holds {} of {} bytes'.format(len(payload), expected))
        if f.read(1):
            raise HeaderMismatchError('payload is longer than the header shape')

    data = np.frombuffer(payload, dtype=dtype).reshape(shape)
    data = data.astype(dtype.newbyteorder('='))
    return TrajectorySet(data, header['dt'], header['dx'], header['signature'],
                         FieldPacking(header['packing']), header.get('provenance'))
