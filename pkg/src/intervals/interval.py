"""
一维二进区间几何
I_ℓ(x) = [2^(ℓ-4) x - 2^(ℓ-1), 2^(ℓ-4) x + 2^(ℓ-1)) 与整数区间
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Iterator, List, Union


@dataclass(frozen=True, order=True)
class IntegerInterval:
    """整数区间 [start, stop)"""
    start: int
    stop: int

    def __post_init__(self):
        if self.stop < self.start:
            raise ValueError(f"区间右端点 {self.stop} 小于左端点 {self.start}")

    @property
    def length(self) -> int:
        return self.stop - self.start

    def __len__(self) -> int:
        return self.length

    def __contains__(self, site: int) -> bool:
        return self.start <= site < self.stop

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.start, self.stop))

    def sites(self) -> FrozenSet[int]:
        return frozenset(range(self.start, self.stop))

    def contains_interval(self, other: 'IntegerInterval') -> bool:
        return self.start <= other.start and other.stop <= self.stop

    def intersects(self, other: 'IntegerInterval') -> bool:
        return max(self.start, other.start) < min(self.stop, other.stop)

    def intersection_length(self, other: 'IntegerInterval') -> int:
        return max(0, min(self.stop, other.stop) - max(self.start, other.start))

    def distance_to(self, site: int) -> int:
        """格点到区间的距离（区间内为0）"""
        if site < self.start:
            return self.start - site
        if site >= self.stop:
            return site - (self.stop - 1)
        return 0

    def interval(self) -> 'IntegerInterval':
        return self


@dataclass(frozen=True)
class DyadicInterval:
    """
    ℓ-区间 I_ℓ(x)

    以 (level, index) 表示；ℓ < 4 时不同的 x 可能给出相同的格点集合，
    这里保留原始下标，不做归一化。
    """
    level: int
    index: int

    def __post_init__(self):
        if self.level < 0:
            raise ValueError(f"层级必须非负: {self.level}")

    @property
    def length(self) -> int:
        return 1 << self.level

    @property
    def real_left(self) -> Fraction:
        """实数左端点 2^(ℓ-4)(x-8)"""
        return Fraction(self.index - 8) * Fraction(2) ** (self.level - 4)

    @property
    def left(self) -> int:
        """最左的整数格点"""
        if self.level >= 4:
            return (self.index - 8) << (self.level - 4)
        return math.ceil(self.real_left)

    @property
    def right(self) -> int:
        """右端点（不含）"""
        return self.left + self.length

    def interval(self) -> IntegerInterval:
        return IntegerInterval(self.left, self.right)

    def sites(self) -> FrozenSet[int]:
        return frozenset(range(self.left, self.right))

    def __contains__(self, site: int) -> bool:
        return self.left <= site < self.right

    def neighbor(self, k: int) -> 'DyadicInterval':
        """I_ℓ(x + 16k)，即平移 k 个区间长度"""
        return DyadicInterval(self.level, self.index + 16 * k)

    def in_subcollection(self, i: int) -> bool:
        """是否属于子族 𝓘_ℓ^i（左端点为 2^(ℓ-4)(16y+i)）"""
        if not 0 <= i <= 15:
            raise ValueError(f"子族编号必须在 0..15 之间: {i}")
        return (self.index - 8 - i) % 16 == 0

    def key(self) -> tuple:
        """按格点集合识别区间的键 (ℓ, 左端点)"""
        return (self.level, self.left)

    def canonical(self) -> 'DyadicInterval':
        """给出同一格点集合中下标最小的表示"""
        return DyadicInterval.from_left(self.level, self.left)

    @classmethod
    def from_left(cls, level: int, left: int) -> 'DyadicInterval':
        """
        由左端点构造区间（取最小下标）

        Raises:
            ValueError: ℓ >= 4 时左端点不在 2^(ℓ-4) 的格上
        """
        if level >= 4:
            step = 1 << (level - 4)
            if left % step:
                raise ValueError(f"左端点 {left} 不是 {level}-区间的合法端点")
            return cls(level, left // step + 8)
        # 满足 ceil((x-8)/2^(4-ℓ)) = left 的最小 x
        return cls(level, (left - 1) * (1 << (4 - level)) + 9)

    def __str__(self) -> str:
        return f"I_{self.level}({self.index})=[{self.left},{self.right})"


IntervalLike = Union[DyadicInterval, IntegerInterval]


def as_interval(iv: IntervalLike) -> IntegerInterval:
    """统一转换为整数区间"""
    return iv.interval()


def left_endpoint_step(level: int) -> int:
    """ℓ-区间左端点的间隔"""
    return 1 << (level - 4) if level >= 4 else 1


def level_lefts(level: int, lo: int, hi: int) -> List[int]:
    """[lo, hi] 内全部合法的 ℓ-区间左端点（升序）"""
    step = left_endpoint_step(level)
    first = -((-lo) // step) * step
    if first > hi:
        return []
    return list(range(first, hi + 1, step))


def intervals_meeting(level: int, region: IntegerInterval) -> List[DyadicInterval]:
    """与区域相交的全部 ℓ-区间（每个格点集合只取一次，按左端点升序）"""
    lefts = level_lefts(level, region.start - (1 << level) + 1, region.stop - 1)
    return [DyadicInterval.from_left(level, a) for a in lefts]


def interval_sites(iv: DyadicInterval) -> FrozenSet[int]:
    """I_ℓ(x) 的整数格点"""
    return iv.sites()


def subcollection(iv: DyadicInterval, i: int) -> bool:
    """iv ∈ 𝓘_ℓ^i"""
    return iv.in_subcollection(i)


def expand(iv: IntervalLike, r: float) -> IntegerInterval:
    """
    ρ_r(I) = {x : d(x, I) <= (r-1)|I|}

    Args:
        iv: 区间
        r: 放大因子，必须 >= 1

    Returns:
        IntegerInterval: 放大后的区间
    """
    if r < 1:
        raise ValueError(f"放大因子必须不小于1: {r}")
    base = as_interval(iv)
    extra = math.floor((Fraction(r) - 1) * base.length) if isinstance(r, (int, Fraction)) \
        else math.floor((r - 1) * base.length + 1e-9)
    return IntegerInterval(base.start - extra, base.stop + extra)


def tile(level: int, y: int) -> IntegerInterval:
    """𝓘_ℓ^0 中的第 y 块 [y 2^ℓ, (y+1) 2^ℓ)"""
    return IntegerInterval(y << level, (y + 1) << level)
