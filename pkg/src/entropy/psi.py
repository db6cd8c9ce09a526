"""
Ψ_ℓ 粗粒化映射与粗集合链
"""

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import numpy as np

from ..intervals.interval import IntegerInterval, IntervalLike, as_interval, tile


def _tile_range(level: int, window: IntegerInterval) -> range:
    """与窗口相交的 𝓘_ℓ^0 块的编号"""
    if window.length == 0:
        return range(0)
    return range(window.start >> level, ((window.stop - 1) >> level) + 1)


def _span(A: FrozenSet[int]) -> IntegerInterval:
    if not A:
        return IntegerInterval(0, 0)
    return IntegerInterval(min(A), max(A) + 1)


@dataclass(frozen=True)
class PsiMap:
    """
    Ψ_ℓ(A, ·)

    values[i] 对应第 first + i 块：-1 表示块 ⊆ A，+1 表示块与 A 不交，0 表示其余。
    """
    level: int
    first: int
    values: Tuple[int, ...]

    def key(self) -> Tuple[int, int, Tuple[int, ...]]:
        return self.level, self.first, self.values

    def value(self, y: int) -> int:
        """第 y 块的取值，窗口外的块视为 +1"""
        i = y - self.first
        if 0 <= i < len(self.values):
            return self.values[i]
        return 1

    def tiles_with(self, v: int) -> List[IntegerInterval]:
        return [tile(self.level, self.first + i) for i, w in enumerate(self.values) if w == v]

    def zero_tiles(self) -> List[IntegerInterval]:
        """取值为0的块 𝒮"""
        return self.tiles_with(0)

    def minus_sites(self) -> FrozenSet[int]:
        """Ψ_ℓ = -1 的块的并；ℓ=0 时即为 A 本身"""
        return frozenset(x for iv in self.tiles_with(-1) for x in iv)

    def to_dict(self) -> Dict:
        return {'level': self.level, 'first': self.first, 'values': list(self.values)}


def psi(A: Iterable[int], ell: int, window: Optional[IntervalLike] = None) -> PsiMap:
    """
    计算 Ψ_ℓ(A, ·)

    Args:
        A: 一维格点集合
        ell: 层级
        window: 窗口，缺省为包含 A 的最小区间
    """
    if ell < 0:
        raise ValueError(f"层级不能为负: {ell}")
    sites = frozenset(int(x) for x in A)
    region = _span(sites) if window is None else as_interval(window)
    tiles = _tile_range(ell, region)
    if not len(tiles):
        return PsiMap(ell, 0, ())
    counts = np.zeros(len(tiles), dtype=np.int64)
    for x in sites:
        i = (x >> ell) - tiles.start
        if 0 <= i < len(tiles):
            counts[i] += 1
    size = 1 << ell
    values = np.where(counts == size, -1, np.where(counts == 0, 1, 0))
    return PsiMap(ell, tiles.start, tuple(int(v) for v in values))


def coarse_sets(A: Iterable[int], n: int) -> List[FrozenSet[int]]:
    """
    粗集合链 A_0 ⊆ A_1 ⊆ ... ⊆ A_{n-2}

    A_ℓ 为与 A 相交的全部 ℓ 层块的并。n < 2 时只返回 [A]。
    """
    sites = frozenset(int(x) for x in A)
    chain = [sites]
    for ell in range(1, max(1, n - 1)):
        ys = {x >> ell for x in sites}
        chain.append(frozenset(x for y in ys for x in tile(ell, y)))
    return chain
