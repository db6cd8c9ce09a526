"""
平衡过程模块
平衡过程、轨迹、Peierls 映射、温和性与过程性质检查
"""

from .procedure import (
    FlipDirection,
    BalanceStep,
    BalanceTrace,
    PeierlsResult,
    run_balancing,
    peierls_map,
    check_tame,
    select_interval,
    volume_interval,
    max_candidate_level,
    step_budget,
)
from .trace_io import TraceRecord, format_trace, parse_trace, write_trace, read_trace, trace_records
from .properties import (
    check_unique_selection,
    check_frozen_cores,
    check_no_outside_minus,
    check_selected_length,
    check_weak_favor_persistence,
    check_peierls_result,
    not_much_flips_report,
    balancing_property_outcomes,
)

__all__ = [
    'FlipDirection', 'BalanceStep', 'BalanceTrace', 'PeierlsResult',
    'run_balancing', 'peierls_map', 'check_tame', 'select_interval',
    'volume_interval', 'max_candidate_level', 'step_budget',
    'TraceRecord', 'format_trace', 'parse_trace', 'write_trace', 'read_trace', 'trace_records',
    'check_unique_selection', 'check_frozen_cores', 'check_no_outside_minus',
    'check_selected_length', 'check_weak_favor_persistence', 'check_peierls_result',
    'not_much_flips_report', 'balancing_property_outcomes',
]
