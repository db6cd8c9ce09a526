"""
二维粗粒化模块
ℓ-立方体、可容许立方体、近似 B_ℓ、层间相互作用 Q_ℓ 及相关检查
"""

from .grid import (
    Cube,
    CubePair,
    CubeGrid,
    shrunk_cube,
    cube_neighbors,
    cube_counts,
    admissible_cubes,
    approximation,
    edge_boundary,
    reconstruct_from_boundary,
)
from .pyramid import (
    PyramidLevel,
    CoarsePyramid,
    build_pyramid,
    pair_interaction,
    level_interaction,
    interaction_window,
    windowed_interaction,
)
from .checks import (
    b6,
    b7,
    large_int_bound,
    no_overlap_check,
    large_int_check,
    ffs_checks,
    edge_pairs_between,
    iso_check,
    iso_exhaustive,
    nesting_check,
    reconstruction_check,
    coarse_outcomes,
)
from .mixing import (
    AnnealSchedule,
    MixingProbe,
    cube_coupling,
    mixing_energy,
    cube_mixing_bound_probe,
    fit_mixing_constant,
)

__all__ = [
    'Cube', 'CubePair', 'CubeGrid', 'shrunk_cube', 'cube_neighbors', 'cube_counts',
    'admissible_cubes', 'approximation', 'edge_boundary', 'reconstruct_from_boundary',
    'PyramidLevel', 'CoarsePyramid', 'build_pyramid', 'pair_interaction', 'level_interaction',
    'interaction_window', 'windowed_interaction',
    'b6', 'b7', 'large_int_bound', 'no_overlap_check', 'large_int_check', 'ffs_checks',
    'edge_pairs_between', 'iso_check', 'iso_exhaustive', 'nesting_check',
    'reconstruction_check', 'coarse_outcomes',
    'AnnealSchedule', 'MixingProbe', 'cube_coupling', 'mixing_energy',
    'cube_mixing_bound_probe', 'fit_mixing_constant',
]
