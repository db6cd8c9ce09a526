"""
随机外场模块
高斯外场、小窗口精确配分函数、误差泛函 Δ_A 及其检查
"""

from .field import DisorderField, sample_field, zero_field
from .gibbs import EXACT_GUARD, ExactGibbs, spins_of, log_partition, delta_A
from .checks import (
    TAIL_GUARD,
    FLIP_WEIGHT_GUARD,
    TailResult,
    tail_bound,
    tail_check,
    tail_outcome,
    GoodEventConstants,
    GoodEventResult,
    good_event_eval,
    event_frequency,
    telescoping_check,
    chain_1d,
    chain_2d,
    antisymmetry_check,
    flip_weight_check,
    cutoff_doubling_check,
    disorder_outcomes,
)

__all__ = [
    'DisorderField', 'sample_field', 'zero_field',
    'EXACT_GUARD', 'ExactGibbs', 'spins_of', 'log_partition', 'delta_A',
    'TAIL_GUARD', 'FLIP_WEIGHT_GUARD', 'TailResult', 'tail_bound', 'tail_check', 'tail_outcome',
    'GoodEventConstants', 'GoodEventResult', 'good_event_eval', 'event_frequency',
    'telescoping_check', 'chain_1d', 'chain_2d', 'antisymmetry_check',
    'flip_weight_check', 'cutoff_doubling_check', 'disorder_outcomes',
]
