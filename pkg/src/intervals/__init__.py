"""
一维区间模块
二进区间几何、尺度常数、密度分类与受偏好/孤立/平衡判定
"""

from .interval import (
    IntegerInterval,
    DyadicInterval,
    IntervalLike,
    as_interval,
    interval_sites,
    subcollection,
    expand,
    level_lefts,
    left_endpoint_step,
    intervals_meeting,
    tile,
)
from .scale import ScaleParams, LARGE_M0
from .density import DensityClass, classify_density, density_flags
from .favored import (
    is_favored,
    is_plus_favored,
    is_minus_favored,
    isolation_sign,
    is_isolated,
    find_isolated_in_region,
    is_balanced,
    DensityProbe,
    plus_density_near_favored,
)

__all__ = [
    'IntegerInterval', 'DyadicInterval', 'IntervalLike', 'as_interval',
    'interval_sites', 'subcollection', 'expand', 'level_lefts',
    'left_endpoint_step', 'intervals_meeting', 'tile',
    'ScaleParams', 'LARGE_M0',
    'DensityClass', 'classify_density', 'density_flags',
    'is_favored', 'is_plus_favored', 'is_minus_favored', 'isolation_sign',
    'is_isolated', 'find_isolated_in_region', 'is_balanced',
    'DensityProbe', 'plus_density_near_favored',
]
