"""
尺度常数
M_ℓ = M0 2^(δℓ)，M'_ℓ = 2⌊M_ℓ/(2c1)⌋
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict

logger = logging.getLogger(__name__)

# M0 达到该值时视为大常数区间，所有依赖 "M0 足够大" 的检查都做硬断言
LARGE_M0 = 2 ** 10


@dataclass(frozen=True)
class ScaleParams:
    """
    尺度参数

    M0 <= 2 或 c1 < 10 属于玩具区间，只记录警告，仍允许使用。
    """
    M0: float
    delta: float
    c1: float = 10.0

    def __post_init__(self):
        if not self.M0 >= 1:
            raise ValueError(f"M0 必须不小于1: {self.M0}")
        if not 0 < self.delta < 1:
            raise ValueError(f"delta 必须在 (0, 1) 内: {self.delta}")
        if not self.c1 > 0:
            raise ValueError(f"c1 必须为正: {self.c1}")
        if self.M0 <= 2 or self.c1 < 10:
            logger.debug(f"尺度参数处于玩具区间: M0={self.M0}, c1={self.c1}")

    def M(self, level: int) -> float:
        """M_ℓ"""
        return self.M0 * 2.0 ** (self.delta * level)

    def M_prime(self, level: int) -> int:
        """M'_ℓ，恒为偶数"""
        return 2 * math.floor(self.M(level) / (2.0 * self.c1))

    def neighbor_count(self, level: int, weak: bool = False) -> int:
        """条件(II)中每侧需要检查的邻居个数"""
        if weak:
            return self.M_prime(level)
        return math.floor(self.M(level) + 1e-12)

    def dense_fraction(self, level: int, weak: bool = False) -> float:
        """稠密阈值 1 - 1/M_ℓ（弱稠密为 1 - c1/M_ℓ）"""
        numerator = self.c1 if weak else 1.0
        return 1.0 - numerator / self.M(level)

    @property
    def is_large_regime(self) -> bool:
        return self.M0 >= LARGE_M0

    @classmethod
    def for_alpha(cls, alpha: float, M0: float = LARGE_M0, c1: float = 10.0) -> 'ScaleParams':
        """带外场模型的缺省 δ = min{0.001, (1.5-α)/20}"""
        if not 1 < alpha < 1.5:
            raise ValueError(f"带外场模型要求 1 < alpha < 1.5: {alpha}")
        return cls(M0=M0, delta=min(0.001, (1.5 - alpha) / 20.0), c1=c1)

    @classmethod
    def pure_model(cls, alpha: float, M0: float = LARGE_M0, c1: float = 10.0) -> 'ScaleParams':
        """无外场模型的 δ = (2-α)/20"""
        if not 1 < alpha < 2:
            raise ValueError(f"无外场模型要求 1 < alpha < 2: {alpha}")
        return cls(M0=M0, delta=(2.0 - alpha) / 20.0, c1=c1)

    def to_dict(self) -> Dict[str, Any]:
        return {'M0': self.M0, 'delta': self.delta, 'c1': self.c1}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ScaleParams':
        return cls(
            M0=float(data.get('M0', LARGE_M0)),
            delta=float(data.get('delta', 0.001)),
            c1=float(data.get('c1', 10.0)),
        )
