"""
    cliffnet.layers.activation
    ~~~~~~~~~~~~~~~~~~~~~~~~~~

    Exact GeLU applied blade by blade.
"""
from .. import autodiff as ad
from ..fields import MultivectorField
from ._base import Module


def clifford_gelu(x):
    """Exact GeLU on every blade coefficient independently.

    Accepts a :class:`MultivectorField` or a tensor.
    """
    if isinstance(x, MultivectorField):
        return x.with_data(ad.gelu(x.data).value)
    return ad.gelu(x)


class GeLU(Module):
    def forward(self, x):
        return clifford_gelu(x)
