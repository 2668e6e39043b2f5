"""
    cliffnet.autodiff
    ~~~~~~~~~~~~~~~~~

    A minimal reverse-mode gradient engine. It covers the primitives the
    layers are made of and nothing more.

    Every primitive is a pair of numpy functions, the forward and its
    vector-Jacobian product. Applying a primitive to :class:`Tensor`
    operands records a node; :class:`Tape` orders the nodes reachable from
    a loss and runs them backwards.
"""

import logging
import threading
import warnings
from contextlib import contextmanager
import numpy as np
from scipy.special import erf
from .errors import ShapeError

__all__ = [
    'Tensor', 'Parameter', 'Primitive', 'Tape', 'Gradients',
    'DisconnectedWarning', 'DegenerateWarning',
    'as_tensor', 'grad', 'fd_check', 'no_grad',
    'stack', 'concatenate', 'einsum', 'conv', 'dft', 'gelu',
    'inv_sqrtm', 'embed', 'take',
]

log = logging.getLogger(__name__)
_local = threading.local()


@contextmanager
def no_grad():
    """Record no nodes inside the block (evaluation, rollouts)."""
    previous = getattr(_local, 'disabled', False)
    _local.disabled = True
    try:
        yield
    finally:
        _local.disabled = previous


class DisconnectedWarning(UserWarning):
    """A parameter has no path to the loss; its gradient is zero."""


class DegenerateWarning(UserWarning):
    """Repeated eigenvalues make a whitening gradient ill-defined."""


class Primitive:
    """A differentiable operation.

    :param name: op name stored on the tape
    :param forward: ``forward(*values, **params) -> value``
    :param vjp: ``vjp(g, out, *values, **params) -> tuple of input gradients``
    """
    def __init__(self, name, forward, vjp):
        self.name = name
        self.forward = forward
        self.vjp = vjp

    def __call__(self, *operands, **params):
        tensors = [as_tensor(t) for t in operands]
        value = self.forward(*[t.value for t in tensors], **params)
        if getattr(_local, 'disabled', False) or not any(t.requires_grad for t in tensors):
            return Tensor(value)
        return Tensor(value, node=Node(self, tensors, params), requires_grad=True)

    def __repr__(self):
        return '<Primitive {}>'.format(self.name)


class Node:
    __slots__ = ('primitive', 'inputs', 'params')

    def __init__(self, primitive, inputs, params):
        self.primitive = primitive
        self.inputs = inputs
        self.params = params


class Tensor:
    """A numpy value with an optional record of how it was computed."""
    __array_priority__ = 100

    def __init__(self, value, node=None, requires_grad=False, name=None):
        if isinstance(value, Tensor):
            value = value.value
        self.value = np.asarray(value)
        self.node = node
        self.requires_grad = requires_grad
        self.name = name

    @property
    def shape(self):
        return self.value.shape

    @property
    def ndim(self):
        return self.value.ndim

    @property
    def dtype(self):
        return self.value.dtype

    @property
    def size(self):
        return self.value.size

    def numpy(self):
        return self.value

    def detach(self):
        return Tensor(self.value)

    def __len__(self):
        return len(self.value)

    def __repr__(self):
        label = ' ' + self.name if self.name else ''
        return '<Tensor{} shape={}{}>'.format(
            label, self.shape, ' grad' if self.requires_grad else '')

    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(other, self)

    def __truediv__(self, other):
        return div(self, other)

    def __rtruediv__(self, other):
        return div(other, self)

    def __neg__(self):
        return neg(self)

    def __getitem__(self, index):
        return getitem(self, index=index)

    def sum(self, axis=None, keepdims=False):
        return reduce_sum(self, axis=axis, keepdims=keepdims)

    def mean(self, axis=None, keepdims=False):
        if axis is None:
            count = self.size
        else:
            axes = (axis,) if np.isscalar(axis) else axis
            count = int(np.prod([self.shape[a] for a in axes]))
        return reduce_sum(self, axis=axis, keepdims=keepdims) / count

    def reshape(self, *shape):
        if len(shape) == 1 and not np.isscalar(shape[0]):
            shape = tuple(shape[0])
        return reshape(self, shape=shape)

    def transpose(self, *axes):
        if len(axes) == 1 and not np.isscalar(axes[0]):
            axes = tuple(axes[0])
        return transpose(self, axes=axes or None)


class Parameter(Tensor):
    """A leaf tensor that gradients are taken with respect to."""
    def __init__(self, value, name=None):
        super(Parameter, self).__init__(np.array(value, dtype=np.float64), requires_grad=True, name=name)


def as_tensor(value):
    if isinstance(value, Tensor):
        return value
    return Tensor(value)


def _unbroadcast(g, shape):
    while g.ndim > len(shape):
        g = g.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and g.shape[axis] != 1:
            g = g.sum(axis=axis, keepdims=True)
    return g


add = Primitive(
    'add', np.add,
    lambda g, out, a, b: (_unbroadcast(g, np.shape(a)), _unbroadcast(g, np.shape(b))),
)
sub = Primitive(
    'sub', np.subtract,
    lambda g, out, a, b: (_unbroadcast(g, np.shape(a)), _unbroadcast(-g, np.shape(b))),
)
mul = Primitive(
    'mul', np.multiply,
    lambda g, out, a, b: (_unbroadcast(g * b, np.shape(a)), _unbroadcast(g * a, np.shape(b))),
)
div = Primitive(
    'div', np.divide,
    lambda g, out, a, b: (
        _unbroadcast(g / b, np.shape(a)),
        _unbroadcast(-g * a / (b * b), np.shape(b)),
    ),
)
neg = Primitive('neg', np.negative, lambda g, out, a: (-g,))


def _sum_vjp(g, out, a, axis=None, keepdims=False):
    if axis is not None and not keepdims:
        g = np.expand_dims(g, axis)
    return (np.broadcast_to(g, np.shape(a)).copy(),)


reduce_sum = Primitive(
    'sum',
    lambda a, axis=None, keepdims=False: np.sum(a, axis=axis, keepdims=keepdims),
    _sum_vjp,
)

reshape = Primitive(
    'reshape',
    lambda a, shape: np.reshape(a, shape),
    lambda g, out, a, shape: (np.reshape(g, np.shape(a)),),
)

transpose = Primitive(
    'transpose',
    lambda a, axes=None: np.transpose(a, axes),
    lambda g, out, a, axes=None: (
        np.transpose(g, None if axes is None else np.argsort(axes)),
    ),
)


def _getitem_vjp(g, out, a, index):
    grad_a = np.zeros(np.shape(a), dtype=g.dtype)
    np.add.at(grad_a, index, g)
    return (grad_a,)


getitem = Primitive('getitem', lambda a, index: a[index], _getitem_vjp)


def _take_forward(a, indices, axis):
    return np.take(a, indices, axis=axis)


def _take_vjp(g, out, a, indices, axis):
    grad_a = np.zeros(np.shape(a), dtype=g.dtype)
    index = (slice(None),) * (axis % np.ndim(a)) + (indices,)
    np.add.at(grad_a, index, g)
    return (grad_a,)


_take = Primitive('take', _take_forward, _take_vjp)


def take(a, indices, axis):
    """Select ``indices`` along ``axis``."""
    return _take(a, indices=np.asarray(indices), axis=axis)


def _embed_forward(a, indices, axis, size):
    axis = axis % np.ndim(a)
    shape = list(np.shape(a))
    shape[axis] = size
    out = np.zeros(shape, dtype=np.result_type(a, np.float64))
    out[(slice(None),) * axis + (indices,)] = a
    return out


_embed = Primitive(
    'embed', _embed_forward,
    lambda g, out, a, indices, axis, size: (np.take(g, indices, axis=axis),),
)


def embed(a, indices, axis, size):
    """Place ``a`` at distinct ``indices`` of a zero axis of length ``size``."""
    indices = np.asarray(indices)
    if len(np.unique(indices)) != len(indices):
        raise ShapeError('embed indices must be distinct')
    return _embed(a, indices=indices, axis=axis, size=size)


def _stack_vjp(g, out, *values, axis=0):
    return tuple(np.take(g, i, axis=axis) for i in range(len(values)))


_stack = Primitive('stack', lambda *values, axis=0: np.stack(values, axis=axis), _stack_vjp)


def stack(tensors, axis=0):
    return _stack(*tensors, axis=axis)


def _concatenate_vjp(g, out, *values, axis=0):
    bounds = np.cumsum([np.shape(v)[axis] for v in values])[:-1]
    return tuple(np.split(g, bounds, axis=axis))


_concatenate = Primitive(
    'concatenate',
    lambda *values, axis=0: np.concatenate(values, axis=axis),
    _concatenate_vjp,
)


def concatenate(tensors, axis=0):
    return _concatenate(*tensors, axis=axis)


def _parse_subscripts(subscripts):
    inputs, output = subscripts.replace(' ', '').split('->')
    return inputs.split(','), output


def _einsum_vjp(g, out, *values, subscripts):
    inputs, output = _parse_subscripts(subscripts)
    grads = []
    for k, spec in enumerate(inputs):
        others = [s for i, s in enumerate(inputs) if i != k]
        operands = [v for i, v in enumerate(values) if i != k]
        expr = ','.join([output] + others) + '->' + spec
        grads.append(np.einsum(expr, g, *operands, optimize=True))
    return tuple(grads)


_einsum = Primitive(
    'einsum',
    lambda *values, subscripts: np.einsum(subscripts, *values, optimize=True),
    _einsum_vjp,
)


def einsum(subscripts, *operands):
    """Explicit-output einsum.

    Every index of an operand must appear in the output or in another
    operand, and no operand may repeat an index.
    """
    inputs, output = _parse_subscripts(subscripts)
    for k, spec in enumerate(inputs):
        if len(set(spec)) != len(spec):
            raise ShapeError('repeated index in einsum operand: ' + spec)
        others = set(output).union(*[set(s) for i, s in enumerate(inputs) if i != k])
        if not set(spec) <= others:
            raise ShapeError('einsum index only used by one operand: ' + spec)
    return _einsum(*operands, subscripts=subscripts)


def _pad_index(size, margin):
    return (np.arange(size + 2 * margin) - margin) % size


def _conv_pad(x, half, padding):
    if padding == 'periodic':
        widths = [(0, 0), (0, 0)] + [(h, h) for h in half]
        return np.pad(x, widths, mode='wrap')
    if padding == 'zero':
        widths = [(0, 0), (0, 0)] + [(h, h) for h in half]
        return np.pad(x, widths, mode='constant')
    raise ValueError('unknown padding: {!r}'.format(padding))


def _conv_windows(x, ksize, stride, padding):
    d = len(ksize)
    half = [k // 2 for k in ksize]
    xp = _conv_pad(x, half, padding)
    axes = tuple(range(2, 2 + d))
    windows = np.lib.stride_tricks.sliding_window_view(xp, ksize, axis=axes)
    if stride != 1:
        windows = windows[(slice(None), slice(None)) + (slice(None, None, stride),) * d]
    windows = windows[(slice(None), slice(None)) + tuple(slice(0, s) for s in _strided(x.shape[2:], stride))]
    return windows


def _strided(shape, stride):
    return tuple(-(-s // stride) for s in shape)


def _conv_forward(x, w, padding='periodic', stride=1):
    d = x.ndim - 2
    ksize = w.shape[2:]
    windows = _conv_windows(x, ksize, stride, padding)
    # windows: [B, Cin, out..., k...]
    axes_x = [1] + list(range(2 + d, 2 + 2 * d))
    axes_w = [1] + list(range(2, 2 + d))
    out = np.tensordot(windows, w, axes=(axes_x, axes_w))
    # [B, out..., Cout] -> [B, Cout, out...]
    return np.moveaxis(out, -1, 1)


def _conv_vjp(g, out, x, w, padding='periodic', stride=1):
    d = x.ndim - 2
    ksize = w.shape[2:]
    half = [k // 2 for k in ksize]
    shape = x.shape[2:]

    windows = _conv_windows(x, ksize, stride, padding)
    spatial = list(range(2, 2 + d))
    grad_w = np.tensordot(g, windows, axes=([0] + spatial, [0] + spatial))
    # [Cout, Cin, k...]

    padded_shape = [s + 2 * h for s, h in zip(shape, half)]
    grad_xp = np.zeros((x.shape[0], x.shape[1]) + tuple(padded_shape), dtype=g.dtype)
    out_shape = g.shape[2:]
    for u in np.ndindex(*ksize):
        tap = np.tensordot(g, w[(slice(None), slice(None)) + u], axes=([1], [0]))
        tap = np.moveaxis(tap, -1, 1)
        index = tuple(
            slice(u[a], u[a] + stride * (out_shape[a] - 1) + 1, stride) for a in range(d)
        )
        grad_xp[(slice(None), slice(None)) + index] += tap

    if padding == 'periodic':
        grad_x = grad_xp
        for a in range(d):
            folded = np.zeros(grad_x.shape[:2 + a] + (shape[a],) + grad_x.shape[3 + a:], dtype=g.dtype)
            index = (slice(None),) * (2 + a) + (_pad_index(shape[a], half[a]),)
            np.add.at(folded, index, grad_x)
            grad_x = folded
    else:
        grad_x = grad_xp[(slice(None), slice(None)) + tuple(slice(h, h + s) for h, s in zip(half, shape))]
    return grad_x, grad_w


_conv = Primitive('conv', _conv_forward, _conv_vjp)


def conv(x, w, padding='periodic', stride=1):
    """Real cross-correlation with "same" padding.

    :param x: ``[batch, c_in, spatial...]``
    :param w: ``[c_out, c_in, k...]`` with odd ``k``
    """
    x = as_tensor(x)
    w = as_tensor(w)
    d = x.ndim - 2
    if d < 1 or w.ndim != d + 2:
        raise ShapeError('conv expects x [B, C, spatial...] and w [Cout, Cin, k...] of matching rank')
    if w.shape[1] != x.shape[1]:
        raise ShapeError('conv channel mismatch: {} vs {}'.format(w.shape[1], x.shape[1]))
    if any(k % 2 == 0 for k in w.shape[2:]):
        raise ShapeError('kernel extents must be odd')
    if padding == 'periodic' and any(k > s for k, s in zip(w.shape[2:], x.shape[2:])):
        raise ShapeError('kernel larger than the periodic grid')
    if stride < 1:
        raise ShapeError('stride must be positive')
    return _conv(x, w, padding=padding, stride=stride)


def _pair_forward(x, axes, inverse):
    z = x[0] + 1j * x[1]
    z = np.fft.ifftn(z, axes=axes) if inverse else np.fft.fftn(z, axes=axes)
    return np.stack([z.real, z.imag])


def _pair_vjp(g, out, x, axes, inverse):
    z = g[0] + 1j * g[1]
    count = int(np.prod([z.shape[a] for a in axes]))
    if inverse:
        z = np.fft.fftn(z, axes=axes) / count
    else:
        z = np.fft.ifftn(z, axes=axes) * count
    return (np.stack([z.real, z.imag]),)


_dft = Primitive('dft', _pair_forward, _pair_vjp)


def dft(x, axes, inverse=False):
    """DFT of complex data in pair layout.

    ``x[0]`` holds the real part and ``x[1]`` the imaginary part; ``axes``
    index the remaining axes and must be negative.
    """
    axes = tuple(axes)
    if any(a >= 0 for a in axes):
        raise ShapeError('dft axes must be given from the end')
    x = as_tensor(x)
    if x.shape[0] != 2:
        raise ShapeError('dft expects a leading re/im axis of length 2')
    return _dft(x, axes=axes, inverse=inverse)


_SQRT2 = np.sqrt(2.0)
_INV_SQRT2PI = 1.0 / np.sqrt(2.0 * np.pi)


def _gelu_forward(x):
    return 0.5 * x * (1.0 + erf(x / _SQRT2))


def _gelu_vjp(g, out, x):
    cdf = 0.5 * (1.0 + erf(x / _SQRT2))
    pdf = _INV_SQRT2PI * np.exp(-0.5 * x * x)
    return (g * (cdf + x * pdf),)


gelu = Primitive('gelu', _gelu_forward, _gelu_vjp)


def _inv_sqrtm_forward(c, eps):
    lam, u = np.linalg.eigh(c)
    lam = np.maximum(lam, eps)
    return np.einsum('...ij,...j,...kj->...ik', u, lam ** -0.5, u)


def _inv_sqrtm_vjp(g, out, c, eps):
    lam, u = np.linalg.eigh(c)
    active = lam > eps
    clamped = np.maximum(lam, eps)
    f = clamped ** -0.5
    df = np.where(active, -0.5 * clamped ** -1.5, 0.0)

    diff = lam[..., :, None] - lam[..., None, :]
    both = active[..., :, None] & active[..., None, :]
    close = np.abs(diff) <= 1e-12 * np.maximum(1.0, np.abs(lam[..., :, None]))
    off_diagonal = ~np.eye(lam.shape[-1], dtype=bool)
    if np.any(close & both & off_diagonal):
        warnings.warn('repeated eigenvalues in whitening gradient', DegenerateWarning, stacklevel=4)

    safe = np.where(close, 1.0, diff)
    ratio = (f[..., :, None] - f[..., None, :]) / safe
    mean_df = 0.5 * (df[..., :, None] + df[..., None, :])
    kernel = np.where(close, mean_df, ratio)

    g = 0.5 * (g + np.swapaxes(g, -1, -2))
    inner = np.einsum('...ji,...jk,...kl->...il', u, g, u)
    grad_c = np.einsum('...ij,...jk,...lk->...il', u, kernel * inner, u)
    return (0.5 * (grad_c + np.swapaxes(grad_c, -1, -2)),)


_inv_sqrtm = Primitive('inv_sqrtm', _inv_sqrtm_forward, _inv_sqrtm_vjp)


def inv_sqrtm(c, eps=1e-5):
    """``C^(-1/2)`` of symmetric matrices ``[..., n, n]``, eigenvalues clamped at ``eps``."""
    c = as_tensor(c)
    if c.ndim < 2 or c.shape[-1] != c.shape[-2]:
        raise ShapeError('inv_sqrtm expects square matrices')
    return _inv_sqrtm(c, eps=eps)


class Tape:
    """Nodes reachable from an output in topological order."""
    def __init__(self, output):
        self.output = output
        self.tensors = self._collect(output)

    @staticmethod
    def _collect(output):
        order = []
        seen = set()
        stack = [(output, False)]
        while stack:
            tensor, expanded = stack.pop()
            if expanded:
                order.append(tensor)
                continue
            if id(tensor) in seen:
                continue
            seen.add(id(tensor))
            stack.append((tensor, True))
            if tensor.node is not None:
                for t in tensor.node.inputs:
                    if id(t) not in seen:
                        stack.append((t, False))
        return order

    def __len__(self):
        return sum(1 for t in self.tensors if t.node is not None)

    def ops(self):
        return [t.node.primitive.name for t in self.tensors if t.node is not None]

    def replay(self):
        """Recompute every recorded value from the leaves.

        Returns the recomputed output value; leaves keep their current value.
        """
        values = {}
        for t in self.tensors:
            if t.node is None:
                values[id(t)] = t.value
            else:
                args = [values[id(i)] for i in t.node.inputs]
                values[id(t)] = t.node.primitive.forward(*args, **t.node.params)
        return values[id(self.output)]

    def backward(self, seed=None):
        """Reverse accumulation; returns ``{id(tensor): gradient}``."""
        grads = {id(self.output): np.ones_like(self.output.value) if seed is None else seed}
        for t in reversed(self.tensors):
            g = grads.get(id(t))
            if g is None or t.node is None:
                continue
            node = t.node
            values = [i.value for i in node.inputs]
            parts = node.primitive.vjp(g, t.value, *values, **node.params)
            for inp, part in zip(node.inputs, parts):
                if not inp.requires_grad:
                    continue
                if id(inp) in grads:
                    grads[id(inp)] = grads[id(inp)] + part
                else:
                    grads[id(inp)] = part
        return grads


class Gradients(list):
    """Gradients in ``wrt`` order; ``disconnected`` lists the positions
    that had no path to the loss."""
    def __init__(self, values, disconnected=()):
        super(Gradients, self).__init__(values)
        self.disconnected = list(disconnected)


def grad(loss, wrt):
    """Gradients of a scalar ``loss`` with respect to each tensor of ``wrt``.

    A tensor without a path to the loss gets a zero gradient and a
    :class:`DisconnectedWarning`.
    """
    loss = as_tensor(loss)
    if loss.size != 1:
        raise ShapeError('loss must be a scalar, got shape {}'.format(loss.shape))
    tape = Tape(loss)
    grads = tape.backward()
    values = []
    disconnected = []
    for k, t in enumerate(wrt):
        g = grads.get(id(t))
        if g is None:
            disconnected.append(k)
            g = np.zeros_like(t.value, dtype=np.float64)
        values.append(np.asarray(g).reshape(t.shape))
    if disconnected:
        names = [wrt[k].name or str(k) for k in disconnected]
        warnings.warn('no gradient path to: ' + ', '.join(names), DisconnectedWarning, stacklevel=2)
    log.debug('backward through %d ops', len(tape))
    return Gradients(values, disconnected)


def fd_check(closure, params, h=1e-5, seed=0, samples=100, floor=1e-4):
    """Compare :func:`grad` against central finite differences.

    :param closure: builds the scalar loss from the current ``params``
    :param params: leaf tensors, perturbed in place one coordinate at a time
    :param samples: number of random coordinates checked
    :param floor: smallest denominator of the relative error
    :return: report dict with ``max_rel_error``, ``max_abs_error``,
             ``checked`` and the worst coordinate
    """
    rng = np.random.default_rng(seed)
    analytic = grad(closure(), params)

    sizes = np.array([p.size for p in params])
    total = int(sizes.sum())
    count = min(samples, total)
    flat = rng.choice(total, size=count, replace=False)
    bounds = np.cumsum(sizes)

    report = {'max_rel_error': 0.0, 'max_abs_error': 0.0, 'checked': count, 'worst': None}
    for index in flat:
        k = int(np.searchsorted(bounds, index, side='right'))
        offset = int(index - (bounds[k - 1] if k else 0))
        param = params[k]
        values = param.value.reshape(-1)
        original = values[offset]

        values[offset] = original + h
        upper = float(closure().value)
        values[offset] = original - h
        lower = float(closure().value)
        values[offset] = original

        numeric = (upper - lower) / (2 * h)
        exact = float(analytic[k].reshape(-1)[offset])
        abs_error = abs(exact - numeric)
        rel_error = abs_error / max(abs(exact), abs(numeric), floor)
        report['max_abs_error'] = max(report['max_abs_error'], abs_error)
        if rel_error >= report['max_rel_error']:
            report['max_rel_error'] = rel_error
            report['worst'] = {
                'param': param.name or str(k), 'offset': offset,
                'analytic': exact, 'numeric': numeric,
            }
    return report
