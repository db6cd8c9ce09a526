"""
用二进区间近似整数区间
"""

import logging
import math
from typing import Optional, Tuple

from ..kernel.errors import StructuralError
from ..intervals.interval import DyadicInterval, IntegerInterval, IntervalLike, as_interval, level_lefts

logger = logging.getLogger(__name__)

APPROXIMATION_SLACK = 0.7


def band_level(length: int) -> int:
    """满足 (15/8) 2^(ℓ-1) >= |I| 的最小 ℓ"""
    level = 0
    while 15 * (1 << level) < 16 * length:
        level += 1
    return level


def endpoint_distances(base: IntegerInterval, level: int, a: int) -> Tuple[int, int]:
    """[a, a+2^ℓ) 两端到 I 的距离 (d(a, I), d(b, I))，b 为最右格点"""
    return base.start - a, a + (1 << level) - base.stop


def _best_at_level(base: IntegerInterval, level: int) -> Optional[Tuple[int, int]]:
    n = base.length
    limit = APPROXIMATION_SLACK * n
    best = None
    for a in level_lefts(level, base.stop - (1 << level), base.start):
        left, right = endpoint_distances(base, level, a)
        worst = max(left, right)
        if worst <= limit + 1e-12 and (best is None or worst < best[1]):
            best = (a, worst)
    return best


def approximate_interval(iv: IntervalLike) -> DyadicInterval:
    """
    找一个包含 I 的 ℓ-区间，两端到 I 的距离都不超过 0.7|I|

    先尝试 (15/8)2^(ℓ-2) <= |I| <= (15/8)2^(ℓ-1) 对应的层级，
    该层不满足时（|I| 很小）从 ℓ=0 起逐层搜索；同层取最大距离最小者。

    Raises:
        ValueError: 区间为空
        StructuralError: 找不到满足条件的区间
    """
    base = as_interval(iv)
    if base.length < 1:
        raise ValueError("区间不能为空")
    preferred = band_level(base.length)
    found = _best_at_level(base, preferred)
    if found is not None:
        return DyadicInterval.from_left(preferred, found[0])

    top = preferred + 2
    for level in range(0, top + 1):
        found = _best_at_level(base, level)
        if found is not None:
            logger.debug(f"{base} 在层级 {level} 得到近似区间（首选层级 {preferred}）")
            return DyadicInterval.from_left(level, found[0])
    raise StructuralError(f"{base} 没有满足距离条件的近似区间")


def approximation_slack(iv: IntervalLike, approx: DyadicInterval) -> float:
    """两端距离的最大值与 |I| 之比"""
    base = as_interval(iv)
    left, right = endpoint_distances(base, approx.level, approx.left)
    return max(left, right) / base.length if base.length else math.inf
