from importlib import import_module
from ..algebra import Signature
from ..errors import ShapeError

__all__ = [
    'SurrogateConfig', 'FAMILIES', 'import_model', 'create_model',
]

_models = {
    'persistence': 'cliffnet.models._base.Persistence',
    'resnet': 'cliffnet.models.resnet.ResNet',
    'cresnet': 'cliffnet.models.resnet.CliffordResNet',
    'cresnet_rot': 'cliffnet.models.resnet.RotationalCliffordResNet',
    'fno': 'cliffnet.models.fno.FNO',
    'cfno': 'cliffnet.models.fno.CliffordFNO',
}
_cached_modules = {}

FAMILIES = tuple(_models)
REAL_FAMILIES = ('resnet', 'fno')
FOURIER_FAMILIES = ('fno', 'cfno')


def import_model(name):
    if name in _cached_modules:
        return _cached_modules[name]

    if callable(name):
        return name

    if name in _models:
        module_path, cls_name = _models[name].rsplit('.', 1)
    elif '.' in name:
        module_path, cls_name = name.rsplit('.', 1)
    else:
        raise ValueError('unknown model family: {!r}'.format(name))

    module = import_module(module_path)
    model_cls = getattr(module, cls_name)
    _cached_modules[name] = model_cls
    return model_cls


class SurrogateConfig:
    """Architecture of a surrogate.

    ``channels`` counts multivector channels for the Clifford families and
    real channels for ``resnet`` / ``fno``.
    """
    DESK_2D = {'ndim': 2, 'grid': 32, 'blocks': 4, 'channels': 16, 'modes': 8}
    DESK_3D = {'ndim': 3, 'grid': 16, 'blocks': 2, 'channels': 8, 'modes': 4}

    FIELDS = (
        'family', 'signature', 'ndim', 'blocks', 'channels', 'modes',
        'history', 'data_channels', 'blades', 'kernel_size', 'norm',
        'faithful', 'seed',
    )

    def __init__(self, family='cfno', signature='2,0', ndim=None, blocks=4, channels=16,
                 modes=8, history=1, data_channels=1, blades=None, kernel_size=3,
                 norm=None, faithful=False, seed=0):
        if family not in _models:
            raise ValueError('unknown model family: {!r}'.format(family))
        signature = Signature.parse(signature)
        self.family = family
        self.signature = signature
        self.ndim = signature.n if ndim is None else int(ndim)
        self.blocks = int(blocks)
        self.channels = int(channels)
        if isinstance(modes, (list, tuple)):
            modes = [int(m) for m in modes]
        else:
            modes = [int(modes)] * self.ndim
        self.modes = modes
        self.history = int(history)
        self.data_channels = int(data_channels)
        self.blades = None if blades is None else [int(b) for b in blades]
        self.kernel_size = int(kernel_size)
        if norm is None:
            norm = family in ('resnet', 'cresnet', 'cresnet_rot')
        self.norm = bool(norm)
        self.faithful = bool(faithful)
        self.seed = int(seed)
        self.validate()

    def validate(self):
        if self.ndim not in (2, 3):
            raise ShapeError('surrogates run on 2D or 3D grids')
        if self.family == 'cresnet_rot' and (self.signature.n != 2 or self.ndim != 2):
            raise ValueError('cresnet_rot needs G^2 fields on a 2D grid')
        if self.family != 'persistence' and self.family not in REAL_FAMILIES \
                and self.signature.n != self.ndim:
            raise ValueError('Clifford surrogates need G^{0} fields on a {0}D grid'.format(self.ndim))
        if len(self.modes) != self.ndim:
            raise ValueError('one mode cutoff per spatial axis expected')
        if min(self.blocks, self.channels, self.history, self.data_channels) < 1:
            raise ValueError('blocks, channels, history and data channels must be positive')
        if self.kernel_size % 2 == 0:
            raise ValueError('kernel size must be odd')

    @property
    def clifford(self):
        return self.family not in REAL_FAMILIES

    def to_dict(self):
        data = {name: getattr(self, name) for name in self.FIELDS}
        data['signature'] = [self.signature.p, self.signature.q]
        return data

    @classmethod
    def from_dict(cls, data):
        unknown = set(data) - set(cls.FIELDS)
        if unknown:
            raise ValueError('unknown config keys: ' + ', '.join(sorted(unknown)))
        return cls(**data)

    def replace(self, **kwargs):
        data = self.to_dict()
        data.update({k: v for k, v in kwargs.items() if v is not None})
        return self.from_dict(data)

    @classmethod
    def desk(cls, family, signature='2,0', **kwargs):
        """Desk-scale defaults; real baselines get twice the channels."""
        signature = Signature.parse(signature)
        desk = dict(cls.DESK_3D if signature.n == 3 else cls.DESK_2D)
        desk.pop('grid')
        if family in REAL_FAMILIES:
            desk['channels'] *= 2
        desk.update(kwargs)
        return cls(family=family, signature=signature, **desk)

    def __eq__(self, other):
        return isinstance(other, SurrogateConfig) and self.to_dict() == other.to_dict()

    def __repr__(self):
        return 'SurrogateConfig({})'.format(', '.join(
            '{}={!r}'.format(k, v) for k, v in self.to_dict().items()))


def create_model(config=None, **kwargs):
    """Create a surrogate model from a config or keyword arguments::

        model = create_model(family='cfno', channels=8, modes=4)
    """
    if config is None:
        config = SurrogateConfig(**kwargs)
    elif isinstance(config, dict):
        config = SurrogateConfig.from_dict(dict(config, **kwargs))
    elif kwargs:
        config = config.replace(**kwargs)
    model_cls = import_model(config.family)
    return model_cls(config)
