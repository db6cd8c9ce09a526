"""
领域异常定义
所有模块共享的错误类型
"""

from typing import List, Optional


class DimensionMismatchError(ValueError):
    """两个格点或集合的维度不一致"""


class WindowTooSmallError(ValueError):
    """计算需要窗口外的自旋值，但构型无法提供"""


class SizeGuardError(ValueError):
    """穷举规模超过上限"""

    def __init__(self, what: str, size: int, limit: int):
        self.what = what
        self.size = size
        self.limit = limit
        super().__init__(f"{what} 的规模 {size} 超过穷举上限 {limit}")


class PreconditionError(ValueError):
    """操作的前置条件不成立"""


class StructuralError(ValueError):
    """结构性不变量被破坏（例如轮廓标签不恒定）"""


class ConfigError(ValueError):
    """实验配置无效，携带全部诊断信息"""

    def __init__(self, diagnostics: List[str], subcommand: Optional[str] = None):
        self.diagnostics = list(diagnostics)
        self.subcommand = subcommand
        head = f"配置无效 ({subcommand})" if subcommand else "配置无效"
        super().__init__(head + ": " + "; ".join(self.diagnostics))


class StepBudgetExceededError(RuntimeError):
    """平衡过程超过步数上限，说明实现存在缺陷"""

    def __init__(self, budget: int):
        self.budget = budget
        super().__init__(f"平衡过程超过步数上限 {budget}")
