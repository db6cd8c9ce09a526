"""
区间密度分类
稠密、空缺、占据及其弱形式
"""

from dataclasses import asdict, dataclass
from typing import Dict

from ..kernel.configuration import SpinConfiguration
from .interval import IntervalLike, as_interval
from .scale import ScaleParams


@dataclass(frozen=True)
class DensityClass:
    """一个 ℓ-区间的密度标志，各标志相互独立"""
    minus_dense: bool
    minus_vacant: bool
    minus_occupied: bool
    plus_dense: bool
    plus_vacant: bool
    plus_occupied: bool
    weak_minus_dense: bool = False
    weak_plus_dense: bool = False
    weak_minus_vacant: bool = False
    weak_plus_vacant: bool = False

    def dense(self, sign: int, weak: bool = False) -> bool:
        """按符号读取（弱）稠密标志"""
        if sign > 0:
            return self.weak_plus_dense if weak else self.plus_dense
        return self.weak_minus_dense if weak else self.minus_dense

    def to_dict(self) -> Dict[str, bool]:
        return asdict(self)


def density_flags(minus: int, length: int, M: float, c1: float) -> DensityClass:
    """由负自旋个数直接得到密度标志"""
    plus = length - minus
    frac_minus = minus / length
    frac_plus = plus / length
    return DensityClass(
        minus_dense=frac_minus > 1.0 - 1.0 / M,
        minus_vacant=frac_minus <= 1.0 / M,
        minus_occupied=frac_minus > 1.0 / M,
        plus_dense=frac_plus > 1.0 - 1.0 / M,
        plus_vacant=frac_plus <= 1.0 / M,
        plus_occupied=frac_plus > 1.0 / M,
        weak_minus_dense=frac_minus > 1.0 - c1 / M,
        weak_plus_dense=frac_plus > 1.0 - c1 / M,
        weak_minus_vacant=frac_minus <= c1 / M,
        weak_plus_vacant=frac_plus <= c1 / M,
    )


def classify_density(iv: IntervalLike, sigma: SpinConfiguration, sp: ScaleParams, level: int = None) -> DensityClass:
    """
    计算区间的密度类别

    Args:
        iv: ℓ-区间（整数区间时需给出 level）
        sigma: 一维构型
        sp: 尺度参数
        level: 层级，缺省取区间自身层级

    Returns:
        DensityClass: 密度标志
    """
    base = as_interval(iv)
    ell = getattr(iv, 'level', level)
    if ell is None:
        ell = max(0, base.length.bit_length() - 1)
    minus = sigma.count_in_range(-1, base.start, base.stop)
    return density_flags(minus, base.length, sp.M(ell), sp.c1)
