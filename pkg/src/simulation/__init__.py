"""
蒙特卡罗模拟模块
Metropolis 链与磁化实验
"""

from .chain import CACHE_TOLERANCE, ChainState, metropolis_sweep
from .experiment import (
    STATIONARY_GUARD,
    THEOREM_RANGES,
    ChainJob,
    in_theorem_range,
    centered_window,
    kept_sweeps,
    run_chain,
    magnetization_experiment,
    infinite_temperature_check,
    trend_check,
    stationary_tv_check,
)

__all__ = [
    'CACHE_TOLERANCE', 'ChainState', 'metropolis_sweep',
    'STATIONARY_GUARD', 'THEOREM_RANGES', 'ChainJob', 'in_theorem_range', 'centered_window',
    'kept_sweeps', 'run_chain', 'magnetization_experiment', 'infinite_temperature_check', 'trend_check',
    'stationary_tv_check',
]
