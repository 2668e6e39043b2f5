"""
    cliffnet
    ~~~~~~~~

    Clifford-algebra multivector fields, Clifford convolution, Fourier and
    normalization layers with gradients, toy PDE data generators and
    surrogate models built from them.
"""

from .algebra import Signature, geometric_product, geometric_product_2d, geometric_product_3d
from .fields import MultivectorField, FieldPacking, pack, unpack
from .transforms import clifford_ft_2d, clifford_ift_2d, clifford_ft_3d, clifford_ift_3d
from .models import SurrogateConfig, create_model, import_model
from .errors import CliffordError

__all__ = [
    'Signature', 'geometric_product', 'geometric_product_2d', 'geometric_product_3d',
    'MultivectorField', 'FieldPacking', 'pack', 'unpack',
    'clifford_ft_2d', 'clifford_ift_2d', 'clifford_ft_3d', 'clifford_ift_3d',
    'SurrogateConfig', 'create_model', 'import_model', 'CliffordError',
]

__version__ = '1.0.0'
