"""
粗粒化金字塔
各层的可容许立方体 𝔠_ℓ、近似 B_ℓ、边界 ∂𝔠_ℓ 与层间相互作用 Q_ℓ
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Tuple

import numpy as np

from ..kernel.coupling import CouplingKernel
from ..contour.geometry import Point
from .grid import (
    Cube,
    CubeGrid,
    CubePair,
    admissible_cubes,
    edge_boundary,
    shrunk_cube,
)

logger = logging.getLogger(__name__)


def pair_interaction(
    A: FrozenSet[Point],
    pair: CubePair,
    ell: int,
    grid: CubeGrid,
    k: CouplingKernel,
) -> float:
    """J(A ∩ Ĉ, A^c ∩ Ĉ')"""
    inside, outside = pair
    X = [x for x in shrunk_cube(inside, ell, grid) if x in A]
    Y = [y for y in shrunk_cube(outside, ell, grid) if y not in A]
    return k.interaction_sum(X, Y)


def level_interaction(A: Iterable[Point], ell: int, grid: CubeGrid, k: CouplingKernel) -> float:
    """
    Q_ℓ(A) = Σ_{(C, C') ∈ ∂𝔠_ℓ(A)} J(A ∩ Ĉ, A^c ∩ Ĉ')

    ℓ = 0 时 Ĉ 为空，Q_0 = 0。
    """
    sites = frozenset(A)
    if not sites or ell == 0:
        return 0.0
    pairs = edge_boundary(admissible_cubes(sites, ell, grid))
    return sum(pair_interaction(sites, pair, ell, grid, k) for pair in pairs)


def top_level(A: FrozenSet[Point], grid: CubeGrid) -> int:
    """最高的可能含有可容许立方体的层级"""
    ell = 0
    while 2 * len(A) >= grid.side(ell + 1) ** 2:
        ell += 1
    return ell


@dataclass
class PyramidLevel:
    """金字塔的一层"""
    level: int
    admissible: FrozenSet[Cube]
    boundary: List[CubePair]
    Q: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'level': self.level,
            'admissible': len(self.admissible),
            'boundary': len(self.boundary),
            'Q': self.Q,
        }


@dataclass
class CoarsePyramid:
    """
    集合 A 的粗粒化金字塔

    levels 覆盖 0..top+1，最高一层没有可容许立方体，B_{top+1} = ∅。
    """
    base: FrozenSet[Point]
    grid: CubeGrid
    levels: List[PyramidLevel] = field(default_factory=list)

    def level(self, ell: int) -> PyramidLevel:
        return self.levels[ell]

    def B(self, ell: int) -> FrozenSet[Point]:
        """B_ℓ(A)"""
        if ell >= len(self.levels):
            return frozenset()
        return frozenset(
            x for c in self.levels[ell].admissible for x in self.grid.cube_sites(c, ell)
        )

    @property
    def total_Q(self) -> float:
        return sum(lv.Q for lv in self.levels)

    def rows(self) -> List[Dict[str, Any]]:
        return [lv.to_dict() for lv in self.levels]


def build_pyramid(A: Iterable[Point], grid: CubeGrid, k: CouplingKernel) -> CoarsePyramid:
    """计算 A 在各层的 𝔠_ℓ、∂𝔠_ℓ 与 Q_ℓ"""
    sites = frozenset(A)
    pyramid = CoarsePyramid(sites, grid)
    for ell in range(top_level(sites, grid) + 2):
        admissible = admissible_cubes(sites, ell, grid)
        boundary = edge_boundary(admissible)
        Q = 0.0 if ell == 0 else sum(pair_interaction(sites, p, ell, grid, k) for p in boundary)
        pyramid.levels.append(PyramidLevel(ell, admissible, boundary, Q))
    logger.debug(f"|A|={len(sites)}: {len(pyramid.levels)} 层，ΣQ = {pyramid.total_Q:.6g}")
    return pyramid


def interaction_window(pyramid: CoarsePyramid, pad: Optional[int] = None) -> Tuple[Point, Point]:
    """
    计算 J(A) 时 A^c 所在的窗口

    取 A 的包围盒外扩 pad（缺省为1层立方体边长），再覆盖全部边界立方体对。
    """
    grid = pyramid.grid
    if not pyramid.base:
        return (0, 0), (0, 0)
    margin = grid.side(1) if pad is None else pad
    coords = np.asarray(sorted(pyramid.base), dtype=np.int64)
    lo = list(coords.min(axis=0) - margin)
    hi = list(coords.max(axis=0) + 1 + margin)
    for lv in pyramid.levels:
        for pair in lv.boundary:
            for c in pair:
                (c_lo0, c_lo1), (c_hi0, c_hi1) = grid.cube_box(c, lv.level)
                lo = [min(lo[0], c_lo0), min(lo[1], c_lo1)]
                hi = [max(hi[0], c_hi0), max(hi[1], c_hi1)]
    return (int(lo[0]), int(lo[1])), (int(hi[0]), int(hi[1]))


def windowed_interaction(
    A: FrozenSet[Point],
    window: Tuple[Point, Point],
    k: CouplingKernel,
) -> float:
    """J(A) = J(A, A^c ∩ W)，不截断"""
    if not A:
        return 0.0
    (lo0, lo1), (hi0, hi1) = window
    mask = np.ones((hi0 - lo0, hi1 - lo1), dtype=bool)
    idx = np.asarray(sorted(A), dtype=np.int64) - np.array([lo0, lo1])
    mask[tuple(idx.T)] = False
    rows, cols = np.nonzero(mask)
    complement = np.stack([rows + lo0, cols + lo1], axis=1)
    return k.interaction_sum(np.asarray(sorted(A), dtype=np.int64), complement)
