import json
import numpy as np
from ..autodiff import Parameter
from ..algebra import Signature, blade_names
from ..errors import ShapeError


class Module:
    """Owner of named parameters and child modules.

    Parameters and children are discovered in attribute assignment order,
    which is the declared order of the flat serialization.
    """
    def __init__(self):
        object.__setattr__(self, '_params', {})
        object.__setattr__(self, '_children', {})

    def __setattr__(self, name, value):
        if isinstance(value, Parameter):
            self._params[name] = value
            if value.name is None:
                value.name = name
        elif isinstance(value, Module):
            self._children[name] = value
        object.__setattr__(self, name, value)

    def add_module(self, name, module):
        setattr(self, name, module)
        return module

    def named_parameters(self, prefix=''):
        for name, param in self._params.items():
            yield prefix + name, param
        for name, child in self._children.items():
            yield from child.named_parameters(prefix + name + '.')

    def parameters(self):
        return [p for _, p in self.named_parameters()]

    def parameter_count(self):
        return sum(p.size for p in self.parameters())

    def modules(self):
        yield self
        for child in self._children.values():
            yield from child.modules()

    def state_dict(self):
        return {name: p.value.copy() for name, p in self.named_parameters()}

    def load_state_dict(self, state):
        for name, param in self.named_parameters():
            if name not in state:
                raise KeyError('missing parameter: ' + name)
            value = np.asarray(state[name], dtype=np.float64)
            if value.shape != param.shape:
                raise ShapeError('{}: expected shape {}, got {}'.format(name, param.shape, value.shape))
            param.value = value.copy()

    def forward(self, x):
        raise NotImplementedError()

    def __call__(self, *args, **kwargs):
        return self.forward(*args, **kwargs)

    def __repr__(self):
        return '<{} params={}>'.format(self.__class__.__name__, self.parameter_count())


class Sequential(Module):
    def __init__(self, *layers):
        super(Sequential, self).__init__()
        self.layers = list(layers)
        for i, layer in enumerate(layers):
            self.add_module(str(i), layer)

    def forward(self, x):
        for layer in self.layers:
            x = layer(x)
        return x


def flatten_parameters(module, dtype=np.float64):
    """Concatenate every parameter in declared order.

    :return: ``(flat array, manifest entries)``
    """
    chunks = []
    entries = []
    offset = 0
    for name, param in module.named_parameters():
        chunks.append(param.value.reshape(-1))
        entries.append({'name': name, 'shape': list(param.shape), 'offset': offset})
        offset += param.size
    flat = np.concatenate(chunks).astype(dtype) if chunks else np.zeros(0, dtype=dtype)
    return flat, entries


def parameter_manifest(module, signature=None, dtype='f64'):
    _, entries = flatten_parameters(module)
    manifest = {
        'parameters': entries,
        'count': module.parameter_count(),
        'dtype': dtype,
    }
    if signature is not None:
        signature = Signature.parse(signature)
        manifest['signature'] = [signature.p, signature.q]
        manifest['blade_order'] = blade_names(signature.n)
    return manifest


def save_parameters(module, path, signature=None, dtype='f64'):
    """Write ``<path>.bin`` (little-endian flat) and ``<path>.json``."""
    np_dtype = '<f8' if dtype == 'f64' else '<f4'
    flat, _ = flatten_parameters(module)
    with open(path + '.bin', 'wb') as f:
        f.write(flat.astype(np_dtype).tobytes())
    with open(path + '.json', 'w') as f:
        json.dump(parameter_manifest(module, signature, dtype), f, indent=2)


def load_parameters(module, path):
    with open(path + '.json') as f:
        manifest = json.load(f)
    np_dtype = '<f8' if manifest.get('dtype', 'f64') == 'f64' else '<f4'
    with open(path + '.bin', 'rb') as f:
        flat = np.frombuffer(f.read(), dtype=np_dtype)
    state = {}
    for entry in manifest['parameters']:
        size = int(np.prod(entry['shape'], dtype=np.int64))
        chunk = flat[entry['offset']:entry['offset'] + size]
        if chunk.size != size:
            raise ShapeError('parameter file is shorter than its manifest')
        state[entry['name']] = chunk.reshape(entry['shape'])
    module.load_state_dict(state)
    return manifest
