"""
验证模块
检查结果、严重程度、检查定义与验证引擎
"""

from .outcome import BoundResult, CheckKind, CheckOutcome, CheckSeverity
from .check import Check, FunctionCheck
from .engine import VerificationEngine, VerificationReport, aggregate_outcomes

__all__ = [
    'BoundResult', 'CheckKind', 'CheckOutcome', 'CheckSeverity',
    'Check', 'FunctionCheck', 'VerificationEngine', 'VerificationReport', 'aggregate_outcomes',
]
