"""
    cliffnet.manifest
    ~~~~~~~~~~~~~~~~~

    Every artifact-producing command writes one run manifest next to its
    outputs: the command, the effective config, the seed, SHA-256 hashes
    of inputs and outputs, and UTC timestamps.
"""

import os
import json
import platform
from datetime import datetime, timezone
from .util import sha256_file
from . import __version__

MANIFEST_SUFFIX = '.run.json'
MANIFEST_NAME = 'run.json'


def _now():
    return datetime.now(timezone.utc).isoformat()


def manifest_path(output):
    """``<dir>/run.json`` for a directory, ``<file>.run.json`` otherwise."""
    if os.path.isdir(output):
        return os.path.join(output, MANIFEST_NAME)
    return output + MANIFEST_SUFFIX


def _hash_entry(path):
    if os.path.isdir(path):
        return {name: sha256_file(os.path.join(path, name))
                for name in sorted(os.listdir(path))
                if os.path.isfile(os.path.join(path, name))}
    return sha256_file(path)


class RunManifest:
    def __init__(self, command, config=None, seed=None, threads=1):
        self.command = command
        self.config = dict(config or {})
        self.seed = seed
        self.threads = threads
        self.version = __version__
        self.started = _now()
        self.finished = None
        self.inputs = {}
        self.outputs = {}

    def add_input(self, path):
        self.inputs[path] = _hash_entry(path)

    def add_output(self, path):
        self.outputs[path] = _hash_entry(path)

    def finish(self):
        self.finished = _now()

    def to_dict(self):
        return {
            'command': self.command,
            'config': self.config,
            'seed': self.seed,
            'threads': self.threads,
            'version': self.version,
            'python': platform.python_version(),
            'started': self.started,
            'finished': self.finished,
            'inputs': self.inputs,
            'outputs': self.outputs,
        }

    def write(self, path):
        if self.finished is None:
            self.finish()
        with open(path, 'w') as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)
        return path

    @classmethod
    def read(cls, path):
        with open(path) as f:
            data = json.load(f)
        manifest = cls(data['command'], data.get('config'), data.get('seed'), data.get('threads', 1))
        manifest.version = data.get('version')
        manifest.started = data.get('started')
        manifest.finished = data.get('finished')
        manifest.inputs = data.get('inputs', {})
        manifest.outputs = data.get('outputs', {})
        return manifest
