"""
一维熵估计模块
Ψ_ℓ 映射、平衡集合族、像计数与粗集合链
"""

from .psi import PsiMap, psi, coarse_sets
from .family import (
    BalancedFamily,
    ENUMERATION_GUARD,
    enumerate_balanced,
    sample_balanced,
    indicator_configuration,
    q_grid,
)
from .counting import (
    WHOLE_LEVEL_BOUND,
    count_images,
    refinement_counts,
    step_entropy_check,
    whole_level_check,
    zero_tile_bound_check,
    coarse_chain_check,
    family_count_rows,
    entropy_outcomes,
)

__all__ = [
    'PsiMap', 'psi', 'coarse_sets',
    'BalancedFamily', 'ENUMERATION_GUARD', 'enumerate_balanced', 'sample_balanced',
    'indicator_configuration', 'q_grid',
    'WHOLE_LEVEL_BOUND', 'count_images', 'refinement_counts', 'step_entropy_check',
    'whole_level_check', 'zero_tile_bound_check', 'coarse_chain_check',
    'family_count_rows', 'entropy_outcomes',
]
