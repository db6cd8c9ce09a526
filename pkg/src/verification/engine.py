"""
验证引擎
执行检查并生成验证报告
"""

import logging
from collections import OrderedDict
from typing import Any, Dict, Iterable, List, Optional

from ..kernel.errors import SizeGuardError, StructuralError, PreconditionError, WindowTooSmallError
from .check import Check
from .outcome import CheckOutcome, CheckSeverity

logger = logging.getLogger(__name__)

# 检查内部抛出这些异常时记为失败的检查结果，其余异常继续向上抛
_RECORDED_ERRORS = (PreconditionError, StructuralError, SizeGuardError, WindowTooSmallError)

_SEVERITY_ORDER = {CheckSeverity.INFO: 0, CheckSeverity.WARNING: 1, CheckSeverity.ERROR: 2}


def aggregate_outcomes(outcomes: Iterable[CheckOutcome], prefix: str = "") -> List[CheckOutcome]:
    """
    按名称合并逐构型的检查结果

    每个名称合并为一条：全部通过才算通过，严重程度取失败项中最高者，
    details 记录检查数、失败数、首个失败以及 value/bound 比值的范围。

    Args:
        outcomes: 逐项结果
        prefix: 加在名称前的前缀
    """
    groups: "OrderedDict[str, List[CheckOutcome]]" = OrderedDict()
    for o in outcomes:
        groups.setdefault(o.name, []).append(o)
    merged = []
    for name, items in groups.items():
        failures = [o for o in items if o.is_failure]
        pool = failures or items
        severity = max((o.severity for o in pool), key=_SEVERITY_ORDER.get)
        ratios = [o.value / o.bound for o in items if o.value is not None and o.bound]
        details: Dict[str, Any] = {'evaluated': len(items), 'failures': len(failures)}
        if ratios:
            details['min_ratio'] = min(ratios)
            details['max_ratio'] = max(ratios)
        if failures:
            first = failures[0]
            details['first_failure'] = first.message or first.details
        message = f"{len(failures)}/{len(items)} 项不成立" if failures else ""
        merged.append(CheckOutcome(
            prefix + name, items[0].kind, severity, not failures, message, details=details,
        ))
    return merged


class VerificationReport:
    """验证报告"""

    def __init__(self, name: str = ""):
        self.name = name
        self.outcomes: List[CheckOutcome] = []

    def add_outcome(self, outcome: CheckOutcome):
        """添加检查结果"""
        self.outcomes.append(outcome)

    def extend(self, outcomes: Iterable[CheckOutcome]):
        for outcome in outcomes:
            self.add_outcome(outcome)

    def merge(self, other: 'VerificationReport'):
        """并入另一份报告的全部结果"""
        self.extend(other.outcomes)

    def _failed(self, severity: CheckSeverity) -> int:
        return sum(1 for o in self.outcomes if o.severity == severity and not o.passed)

    def get_error_count(self) -> int:
        """获取失败的硬断言数量"""
        return self._failed(CheckSeverity.ERROR)

    def get_warning_count(self) -> int:
        """获取失败的比值报告数量"""
        return self._failed(CheckSeverity.WARNING)

    def get_info_count(self) -> int:
        """获取信息数量"""
        return sum(1 for o in self.outcomes if o.severity == CheckSeverity.INFO)

    def get_passed_count(self) -> int:
        return sum(1 for o in self.outcomes if o.passed and o.severity != CheckSeverity.INFO)

    def failures(self) -> List[CheckOutcome]:
        return [o for o in self.outcomes if o.is_failure]

    def is_valid(self) -> bool:
        """是否全部硬断言通过"""
        return self.get_error_count() == 0

    def rows(self) -> List[Dict[str, Any]]:
        """逐条结果的导出行"""
        return [
            {
                'name': o.name,
                'kind': o.kind.value,
                'severity': o.severity.value,
                'passed': o.passed,
                'value': o.value,
                'bound': o.bound,
                'message': o.message,
            }
            for o in self.outcomes
        ]

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典"""
        return {
            "name": self.name,
            "valid": self.is_valid(),
            "total": len(self.outcomes),
            "passed_count": self.get_passed_count(),
            "error_count": self.get_error_count(),
            "warning_count": self.get_warning_count(),
            "info_count": self.get_info_count(),
            "outcomes": [o.to_dict() for o in self.outcomes],
        }

    def get_summary(self) -> str:
        """获取摘要信息"""
        return (
            f"检查项: {len(self.outcomes)}\n"
            f"通过: {self.get_passed_count()}\n"
            f"错误: {self.get_error_count()}\n"
            f"警告: {self.get_warning_count()}\n"
            f"信息: {self.get_info_count()}"
        )


class VerificationEngine:
    """
    验证引擎
    管理和执行验证检查
    """

    def __init__(self, name: str = ""):
        self.name = name
        self.checks: List[Check] = []

    def add_check(self, check: Check):
        """添加检查"""
        self.checks.append(check)

    def remove_check(self, check_name: str):
        """删除检查"""
        self.checks = [c for c in self.checks if c.name != check_name]

    def clear_checks(self):
        """清空所有检查"""
        self.checks = []

    def run(self, monitor=None, **kwargs) -> VerificationReport:
        """
        执行全部检查

        检查抛出的领域异常（前置条件、结构、规模上限、窗口不足）记为该检查失败，
        不会中断其余检查。

        Args:
            monitor: 可选的 ProgressMonitor
            **kwargs: 传递给每个检查的共享上下文

        Returns:
            VerificationReport: 验证报告
        """
        report = VerificationReport(self.name)
        if monitor:
            monitor.start(len(self.checks), self.name)
        for i, check in enumerate(self.checks):
            logger.info(f"执行检查: {check.name}")
            try:
                produced = check.run(**kwargs)
            except _RECORDED_ERRORS as e:
                logger.error(f"检查 {check.name} 抛出异常: {e}")
                produced = [CheckOutcome.hard(check.name, check.kind, False, f"{type(e).__name__}: {e}")]
            report.extend(produced)
            if monitor:
                monitor.stage_completed(check.name, len(produced), sum(o.is_failure for o in produced))
                monitor.update(i + 1, check.name)
        if monitor:
            monitor.complete(f"{self.name}: {report.get_error_count()} 个错误")
        logger.info(f"{self.name or '验证'}: {report.get_error_count()} 个错误, {report.get_warning_count()} 个警告")
        return report
