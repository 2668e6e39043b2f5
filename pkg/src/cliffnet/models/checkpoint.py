"""
    cliffnet.models.checkpoint
    ~~~~~~~~~~~~~~~~~~~~~~~~~~

    A checkpoint is a directory::

        manifest.json   config, parameter names/shapes/offsets, step, curve
        params.bin      little-endian float64 parameters in declared order
        adam_m.bin      first Adam moments, same layout (optional)
        adam_v.bin      second Adam moments, same layout (optional)
"""

import os
import json
import numpy as np
from ..algebra import blade_names
from ..errors import ShapeError
from ..layers import flatten_parameters
from . import SurrogateConfig, create_model

__all__ = ['CHECKPOINT_FORMAT', 'Checkpoint', 'save_checkpoint', 'load_checkpoint']

CHECKPOINT_FORMAT = 'cliffnet-checkpoint/1'

MANIFEST_FILE = 'manifest.json'
PARAMS_FILE = 'params.bin'
MOMENT_FILES = ('adam_m.bin', 'adam_v.bin')


class Checkpoint:
    def __init__(self, model, manifest, optimizer_state=None):
        self.model = model
        self.manifest = manifest
        self.optimizer_state = optimizer_state

    @property
    def config(self):
        return self.model.config

    @property
    def step(self):
        return self.manifest.get('step', 0)

    @property
    def epoch(self):
        return self.manifest.get('epoch', 0)

    @property
    def curve(self):
        return [tuple(row) for row in self.manifest.get('curve', [])]

    @property
    def data(self):
        return self.manifest.get('data', {})


def _write_flat(path, arrays):
    flat = np.concatenate([a.reshape(-1) for a in arrays]) if arrays else np.zeros(0)
    with open(path, 'wb') as f:
        f.write(flat.astype('<f8').tobytes())


def _read_flat(path, entries):
    with open(path, 'rb') as f:
        flat = np.frombuffer(f.read(), dtype='<f8')
    out = []
    for entry in entries:
        size = int(np.prod(entry['shape'], dtype=np.int64))
        chunk = flat[entry['offset']:entry['offset'] + size]
        if chunk.size != size:
            raise ShapeError('{} is shorter than its manifest'.format(os.path.basename(path)))
        out.append(chunk.reshape(entry['shape']).astype(np.float64))
    return out


def save_checkpoint(path, model, optimizer=None, step=0, epoch=0, curve=(), data=None):
    """Write the checkpoint directory ``path`` and return its manifest."""
    os.makedirs(path, exist_ok=True)
    flat, entries = flatten_parameters(model)
    with open(os.path.join(path, PARAMS_FILE), 'wb') as f:
        f.write(flat.astype('<f8').tobytes())

    opt = None
    if optimizer is not None:
        state = optimizer.state_dict()
        _write_flat(os.path.join(path, MOMENT_FILES[0]), state['m'])
        _write_flat(os.path.join(path, MOMENT_FILES[1]), state['v'])
        opt = {
            't': state['t'], 'lr': optimizer.lr,
            'betas': list(optimizer.betas), 'eps': optimizer.eps,
        }

    manifest = {
        'format': CHECKPOINT_FORMAT,
        'config': model.config.to_dict(),
        'signature': [model.signature.p, model.signature.q],
        'blade_order': blade_names(model.signature.n),
        'dtype': 'f64',
        'count': model.parameter_count(),
        'parameters': entries,
        'step': int(step),
        'epoch': int(epoch),
        'optimizer': opt,
        'curve': [list(row) for row in curve],
        'data': data or {},
    }
    with open(os.path.join(path, MANIFEST_FILE), 'w') as f:
        json.dump(manifest, f, indent=2)
    return manifest


def load_checkpoint(path):
    with open(os.path.join(path, MANIFEST_FILE)) as f:
        manifest = json.load(f)
    if manifest.get('format') != CHECKPOINT_FORMAT:
        raise ValueError('not a cliffnet checkpoint: ' + path)

    model = create_model(SurrogateConfig.from_dict(manifest['config']))
    entries = manifest['parameters']
    values = _read_flat(os.path.join(path, PARAMS_FILE), entries)
    model.load_state_dict({e['name']: v for e, v in zip(entries, values)})

    optimizer_state = None
    if manifest.get('optimizer'):
        m = _read_flat(os.path.join(path, MOMENT_FILES[0]), entries)
        v = _read_flat(os.path.join(path, MOMENT_FILES[1]), entries)
        optimizer_state = {'t': manifest['optimizer']['t'], 'm': m, 'v': v}
    return Checkpoint(model, manifest, optimizer_state)
