"""
核心应用模块
实验配置、实验应用、进度监控与并行工具
"""

from .parallel import ordered_map, make_rng, spawn_rngs, chunked, keyed_rng
from .config import ExperimentConfig, SUBCOMMANDS, DEFAULTS
from .progress_monitor import ProgressMonitor, ProgressEvent, ProgressEventType, logging_callback

__all__ = [
    'ordered_map', 'make_rng', 'spawn_rngs', 'chunked', 'keyed_rng',
    'ExperimentConfig', 'SUBCOMMANDS', 'DEFAULTS',
    'ProgressMonitor', 'ProgressEvent', 'ProgressEventType', 'logging_callback',
]
