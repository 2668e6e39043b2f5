from ._base import (
    Module, Sequential, flatten_parameters, parameter_manifest,
    save_parameters, load_parameters,
)
from .init import (
    CliffordKernel, RotationalKernel, SpectralWeights,
    init_clifford, init_rotational, init_spectral,
)
from .conv import (
    assemble_kernel, clifford_conv, clifford_conv2d, clifford_conv3d,
    CliffordConv, CliffordConv2d, CliffordConv3d, Conv,
)
from .rotational import (
    assemble_rotational_kernel, rotational_conv, rotational_clifford_conv2d,
    RotationalCliffordConv2d,
)
from .activation import clifford_gelu, GeLU
from .spectral import (
    clifford_spectral, real_spectral, clifford_spectral_conv2d,
    clifford_spectral_conv3d, clifford_fourier_block,
    CliffordSpectralConv2d, CliffordSpectralConv3d, CliffordFourierBlock,
    SpectralConv,
)
from .norm import (
    NORM_EPSILON, CliffordNormState, whiten_groups, whiten_batch,
    clifford_groupnorm, clifford_batchnorm,
    CliffordGroupNorm, CliffordBatchNorm, GroupNorm,
)

__all__ = [
    'Module', 'Sequential', 'flatten_parameters', 'parameter_manifest',
    'save_parameters', 'load_parameters',
    'CliffordKernel', 'RotationalKernel', 'SpectralWeights',
    'init_clifford', 'init_rotational', 'init_spectral',
    'assemble_kernel', 'clifford_conv', 'clifford_conv2d', 'clifford_conv3d',
    'CliffordConv', 'CliffordConv2d', 'CliffordConv3d', 'Conv',
    'assemble_rotational_kernel', 'rotational_conv', 'rotational_clifford_conv2d',
    'RotationalCliffordConv2d',
    'clifford_gelu', 'GeLU',
    'clifford_spectral', 'real_spectral', 'clifford_spectral_conv2d',
    'clifford_spectral_conv3d', 'clifford_fourier_block',
    'CliffordSpectralConv2d', 'CliffordSpectralConv3d', 'CliffordFourierBlock',
    'SpectralConv',
    'NORM_EPSILON', 'CliffordNormState', 'whiten_groups', 'whiten_batch',
    'clifford_groupnorm', 'clifford_batchnorm',
    'CliffordGroupNorm', 'CliffordBatchNorm', 'GroupNorm',
]
