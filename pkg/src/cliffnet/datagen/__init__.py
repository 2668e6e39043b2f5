"""Toy PDE trajectory generators and the CLF1 dataset container."""

from .clf import MAGIC, TrajectorySet, write_clf, read_clf, read_clf_header
from .advection import VELOCITY_LAWS, gen_advection2d
from .maxwell import YeeSolver, CurrentSheet, plane_wave, courant_limit, gen_maxwell3d

_generators = {
    'advection2d': gen_advection2d,
    'maxwell3d': gen_maxwell3d,
}


def get_generator(name):
    try:
        return _generators[name]
    except KeyError:
        raise ValueError('unknown generator: {!r}'.format(name))


__all__ = [
    'MAGIC', 'TrajectorySet', 'write_clf', 'read_clf', 'read_clf_header',
    'VELOCITY_LAWS', 'gen_advection2d',
    'YeeSolver', 'CurrentSheet', 'plane_wave', 'courant_limit', 'gen_maxwell3d',
    'get_generator',
]
