"""
能量估计中的指数与常数
"""

import math
from dataclasses import dataclass
from typing import Any, Dict

LOG_39_OF_2 = math.log(2.0) / math.log(3.9)


def c_bar_1(alpha: float) -> float:
    """相互作用下界常数 2^(-α)，由 Σ_{k=m+1}^{2m} k^(-α) >= m(2m)^(-α) 得到"""
    return 2.0 ** -alpha


def c_bar_3(alpha: float) -> float:
    """近邻相互作用常数 2^α / c̄1 = 4^α"""
    return 4.0 ** alpha


@dataclass(frozen=True)
class ThetaParams:
    """θ = min{2 - α - 10δ, log_3.9 2}"""
    alpha: float
    delta: float

    @property
    def theta(self) -> float:
        return min(2.0 - self.alpha - 10.0 * self.delta, LOG_39_OF_2)

    def power(self, size: float) -> float:
        """|I|^θ"""
        return float(size) ** self.theta

    def to_dict(self) -> Dict[str, Any]:
        return {'alpha': self.alpha, 'delta': self.delta, 'theta': self.theta}
