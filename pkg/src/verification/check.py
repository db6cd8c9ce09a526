"""
验证检查定义
"""

from abc import ABC, abstractmethod
from typing import Any, Callable, Dict, Iterable, List, Optional, Union

from .outcome import CheckKind, CheckOutcome


class Check(ABC):
    """
    验证检查基类
    所有检查都需要继承此类并实现run方法
    """

    def __init__(self, name: str, kind: CheckKind, description: str = ""):
        self.name = name
        self.kind = kind
        self.description = description

    @abstractmethod
    def run(self, **kwargs) -> List[CheckOutcome]:
        """
        执行检查

        Args:
            **kwargs: 由引擎传入的共享上下文

        Returns:
            List[CheckOutcome]: 检查结果，可以有多条
        """
        pass

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典"""
        return {
            "name": self.name,
            "kind": self.kind.value,
            "description": self.description,
        }


OutcomeLike = Union[CheckOutcome, Iterable[CheckOutcome]]


class FunctionCheck(Check):
    """把返回 CheckOutcome（或其列表）的函数包装为检查"""

    def __init__(
        self,
        name: str,
        func: Callable[..., OutcomeLike],
        kind: CheckKind = CheckKind.PROPERTY,
        description: str = "",
    ):
        super().__init__(name, kind, description)
        self.func = func

    def run(self, **kwargs) -> List[CheckOutcome]:
        result = self.func(**kwargs)
        if isinstance(result, CheckOutcome):
            return [result]
        return list(result)
