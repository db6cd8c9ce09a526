"""
检查结果定义
"""

import math
from enum import Enum
from typing import Any, Dict, NamedTuple, Optional


class CheckKind(Enum):
    """检查类型"""
    IDENTITY = "identity"  # 恒等式，数值精确相等
    BOUND = "bound"  # 不等式，左侧不超过/不低于右侧
    PROPERTY = "property"  # 结构性质
    STATISTICAL = "statistical"  # 带置信余量的统计检查
    CALIBRATION = "calibration"  # 常数标定


class CheckSeverity(Enum):
    """检查严重程度"""
    ERROR = "error"  # 硬断言，失败即无效
    WARNING = "warning"  # 依赖常数区间的比值报告，失败需注意
    INFO = "info"  # 信息，仅记录


class BoundResult(NamedTuple):
    """不等式两侧的数值与是否成立"""
    value: float
    bound: float
    passed: bool

    @property
    def ratio(self) -> float:
        if self.bound == 0:
            return math.inf if self.value > 0 else 1.0
        return self.value / self.bound


class CheckOutcome:
    """单项检查的结果"""

    def __init__(
        self,
        name: str,
        kind: CheckKind,
        severity: CheckSeverity,
        passed: bool,
        message: str = "",
        value: Optional[float] = None,
        bound: Optional[float] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        self.name = name
        self.kind = kind
        self.severity = severity
        self.passed = bool(passed)
        self.message = message
        self.value = value
        self.bound = bound
        self.details = details or {}

    @classmethod
    def hard(cls, name: str, kind: CheckKind, passed: bool, message: str = "", **kwargs) -> 'CheckOutcome':
        """硬断言结果"""
        return cls(name, kind, CheckSeverity.ERROR, passed, message, **kwargs)

    @classmethod
    def regime(
        cls,
        name: str,
        kind: CheckKind,
        passed: bool,
        large_regime: bool,
        message: str = "",
        **kwargs,
    ) -> 'CheckOutcome':
        """
        依赖常数区间的结果

        大常数区间下为硬断言，否则失败只记为警告。
        """
        severity = CheckSeverity.ERROR if large_regime else CheckSeverity.WARNING
        return cls(name, kind, severity, passed, message, **kwargs)

    @classmethod
    def info(cls, name: str, kind: CheckKind, message: str = "", **kwargs) -> 'CheckOutcome':
        """只记录的信息"""
        return cls(name, kind, CheckSeverity.INFO, True, message, **kwargs)

    @classmethod
    def from_bound(
        cls,
        name: str,
        result: BoundResult,
        severity: CheckSeverity = CheckSeverity.ERROR,
        message: str = "",
        **details,
    ) -> 'CheckOutcome':
        return cls(
            name, CheckKind.BOUND, severity, result.passed, message,
            value=float(result.value), bound=float(result.bound), details=details,
        )

    @property
    def is_failure(self) -> bool:
        return not self.passed and self.severity != CheckSeverity.INFO

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典"""
        return {
            "name": self.name,
            "kind": self.kind.value,
            "severity": self.severity.value,
            "passed": self.passed,
            "message": self.message,
            "value": self.value,
            "bound": self.bound,
            "details": self.details,
        }

    def __repr__(self):
        state = "通过" if self.passed else "失败"
        return f"CheckOutcome({self.name}, {self.severity.value}, {state})"
