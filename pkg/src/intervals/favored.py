"""
受偏好区间、孤立区间与平衡区域的判定
"""

import logging
from typing import NamedTuple, Optional

import numpy as np

from ..kernel.configuration import SpinConfiguration
from ..kernel.errors import PreconditionError
from .interval import DyadicInterval, IntegerInterval, IntervalLike, as_interval, expand, level_lefts
from .scale import ScaleParams

logger = logging.getLogger(__name__)


def _level_of(iv: IntervalLike) -> int:
    if isinstance(iv, DyadicInterval):
        return iv.level
    length = as_interval(iv).length
    if length <= 0 or length & (length - 1):
        raise ValueError(f"区间长度 {length} 不是2的幂")
    return length.bit_length() - 1


def is_favored(
    iv: IntervalLike,
    sigma: SpinConfiguration,
    sp: ScaleParams,
    sign: int,
    weak: bool = False,
) -> bool:
    """
    判断区间是否 sign 受偏好

    条件(I)：距离区间 1..2^(ℓ-1) 的格点全为 sign；
    条件(II)：I_ℓ(x±16k)（1 <= k <= ⌊M_ℓ⌋，弱形式为 M'_ℓ）均为（弱）sign 稠密。

    Raises:
        WindowTooSmallError: 需要窗口外自旋而边界值未知
    """
    base = as_interval(iv)
    level = _level_of(iv)
    n = base.length
    a, b = base.start, base.stop
    width = n // 2
    if width:
        if sigma.count_in_range(-sign, a - width, a) or sigma.count_in_range(-sign, b, b + width):
            return False

    k_max = sp.neighbor_count(level, weak)
    if k_max <= 0:
        return True
    ks = np.arange(1, k_max + 1, dtype=np.int64)
    lows = np.concatenate([a + ks * n, a - ks * n])
    counts = sigma.count_in_range(sign, lows, lows + n)
    threshold = n * sp.dense_fraction(level, weak)
    return bool(np.all(counts > threshold))


def is_plus_favored(iv: IntervalLike, sigma: SpinConfiguration, sp: ScaleParams, weak: bool = False) -> bool:
    """正受偏好"""
    return is_favored(iv, sigma, sp, 1, weak)


def is_minus_favored(iv: IntervalLike, sigma: SpinConfiguration, sp: ScaleParams, weak: bool = False) -> bool:
    """负受偏好"""
    return is_favored(iv, sigma, sp, -1, weak)


def isolation_sign(
    iv: IntervalLike,
    sigma: SpinConfiguration,
    sp: ScaleParams,
    weak: bool = False,
) -> Optional[int]:
    """
    区间的孤立类型

    Returns:
        Optional[int]: +1 表示正孤立，-1 表示负孤立，None 表示不孤立
    """
    base = as_interval(iv)
    minus = sigma.count_in_range(-1, base.start, base.stop)
    if minus > 0 and is_favored(iv, sigma, sp, 1, weak):
        return 1
    if minus < base.length and is_favored(iv, sigma, sp, -1, weak):
        return -1
    return None


def is_isolated(
    iv: IntervalLike,
    sigma: SpinConfiguration,
    sp: ScaleParams,
    weak: bool = False,
) -> bool:
    """正孤立或负孤立"""
    return isolation_sign(iv, sigma, sp, weak) is not None


def find_isolated_in_region(
    region: IntegerInterval,
    sigma: SpinConfiguration,
    sp: ScaleParams,
    skip_origin_plus: bool = False,
) -> Optional[DyadicInterval]:
    """
    在区域内寻找满足 ρ_{M_ℓ}(I') ⊆ region 的孤立区间

    skip_origin_plus 为真时忽略包含原点的正孤立区间。

    Returns:
        Optional[DyadicInterval]: 找到的第一个（层级最小、最左）孤立区间
    """
    level = 0
    while (1 << level) <= region.length:
        n = 1 << level
        extra = max(0, expand(IntegerInterval(0, n), max(1.0, sp.M(level))).stop - n)
        lo = region.start + extra
        hi = region.stop - extra - n
        for a in level_lefts(level, lo, hi):
            candidate = DyadicInterval.from_left(level, a)
            sign = isolation_sign(candidate, sigma, sp)
            if sign is None:
                continue
            if skip_origin_plus and sign > 0 and 0 in candidate:
                continue
            return candidate
        level += 1
    return None


def is_balanced(
    region: IntervalLike,
    sigma: SpinConfiguration,
    sp: ScaleParams,
    skip_origin_plus: bool = False,
) -> bool:
    """
    区域是否平衡：没有满足 ρ_{M_ℓ}(I') ⊆ region 的孤立 ℓ-区间

    Args:
        region: 一维整数区间
        sigma: 构型
        sp: 尺度参数
        skip_origin_plus: 是否忽略包含原点的正孤立区间
    """
    return find_isolated_in_region(as_interval(region), sigma, sp, skip_origin_plus) is None


class DensityProbe(NamedTuple):
    """受偏好区间附近正自旋密度的检查结果"""
    passed: bool
    worst_p: int
    worst_count: int
    required: float


def plus_density_near_favored(iv: DyadicInterval, sigma: SpinConfiguration, sp: ScaleParams) -> DensityProbe:
    """
    正受偏好区间 [a, a+2^ℓ) 两侧的正自旋密度

    对 0 < p <= M_ℓ 2^ℓ，[a+2^ℓ, a+2^ℓ+p) 与 [a-p, a) 中正自旋数应不少于 (1-2/M_ℓ)p。

    Raises:
        PreconditionError: 区间不是正受偏好的
    """
    if not is_plus_favored(iv, sigma, sp):
        raise PreconditionError(f"{iv} 不是正受偏好区间")
    n = iv.length
    M = sp.M(iv.level)
    p_max = int(np.floor(M * n + 1e-9))
    if p_max < 1:
        return DensityProbe(True, 0, 0, 0.0)
    ps = np.arange(1, p_max + 1, dtype=np.int64)
    a, b = iv.left, iv.right
    right = sigma.count_in_range(1, np.full_like(ps, b), b + ps)
    left = sigma.count_in_range(1, a - ps, np.full_like(ps, a))
    required = (1.0 - 2.0 / M) * ps
    slack = np.minimum(right, left) - required
    worst = int(np.argmin(slack))
    passed = bool(np.all(slack >= -1e-9))
    if not passed:
        logger.info(f"{iv} 附近正自旋密度不足: p={ps[worst]}")
    return DensityProbe(passed, int(ps[worst]), int(min(right[worst], left[worst])), float(required[worst]))
