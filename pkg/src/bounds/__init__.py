"""
一维能量估计模块
相互作用下界、近似区间、λ-好序列、Peierls 能量估计、引理检查与常数标定
"""

from .theta import ThetaParams, c_bar_1, c_bar_3, LOG_39_OF_2
from .interaction import (
    min_interaction_lower_bound_check,
    set_interaction_lower_bound_check,
    mixed_interaction,
    balanced_interaction_check,
)
from .approximate import approximate_interval, approximation_slack, band_level, APPROXIMATION_SLACK
from .sequences import (
    GoodSequence,
    is_lambda_good,
    good_mask,
    sequence01_bound_check,
    sequence01_result,
    SEQUENCE_GUARD,
)
from .energy import energy_bound_1_check, energy_bound_2_check
from .peierls_checks import (
    flip_families,
    first_interaction_check,
    fake_interval_expansion_check,
    far_interaction_check,
    close_interaction_check,
    peierls_lemma_outcomes,
)
from .calibration import CalibrationResult, calibrate_c_bar_2, calibrate_c2
from .constants import ConstantsStore

__all__ = [
    'ThetaParams', 'c_bar_1', 'c_bar_3', 'LOG_39_OF_2',
    'min_interaction_lower_bound_check', 'set_interaction_lower_bound_check',
    'mixed_interaction', 'balanced_interaction_check',
    'approximate_interval', 'approximation_slack', 'band_level', 'APPROXIMATION_SLACK',
    'GoodSequence', 'is_lambda_good', 'good_mask', 'sequence01_bound_check',
    'sequence01_result', 'SEQUENCE_GUARD',
    'energy_bound_1_check', 'energy_bound_2_check',
    'flip_families', 'first_interaction_check', 'fake_interval_expansion_check',
    'far_interaction_check', 'close_interaction_check', 'peierls_lemma_outcomes',
    'CalibrationResult', 'calibrate_c_bar_2', 'calibrate_c2',
    'ConstantsStore',
]
