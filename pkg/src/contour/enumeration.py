"""
小规模轮廓穷举
统计 |γ| = n 且 0 ∈ V(γ) 的外部轮廓个数 |𝒞_0(n)|
"""

import logging
import math
from dataclasses import dataclass, field
from functools import partial
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..kernel.configuration import SpinConfiguration
from ..kernel.errors import SizeGuardError
from ..core.parallel import chunked, ordered_map
from .contour import Contour, extract_contours
from .partition import PartitionParams

logger = logging.getLogger(__name__)

CONTOUR_SIZE_GUARD = 8


def box_side(n: int) -> int:
    """
    穷举所用盒子的边长

    |γ| = n 的外部轮廓所围的负自旋最多只跨 n//2 - 1 个格点。
    """
    return max(1, n // 2 - 1)


def _shape_key(contour: Contour) -> tuple:
    norm = contour.normalized()
    holes = tuple(sorted(tuple(sorted(h)) for h in norm.holes))
    return norm.spins, holes, norm.hole_labels, norm.outer_label


def _realize(contour: Contour) -> SpinConfiguration:
    # 由支撑上的自旋与各洞的标签重建一个生成构型
    V = contour.V
    lo = (min(x[0] for x in V), min(x[1] for x in V))
    hi = (max(x[0] for x in V) + 1, max(x[1] for x in V) + 1)
    spins = np.ones((hi[0] - lo[0], hi[1] - lo[1]), dtype=np.int8)
    for x, s in contour.spins:
        spins[x[0] - lo[0], x[1] - lo[1]] = s
    for hole, label in zip(contour.holes, contour.hole_labels):
        for x in hole:
            spins[x[0] - lo[0], x[1] - lo[1]] = label
    return SpinConfiguration(spins, lo, outside_value=1)


def is_realizable(contour: Contour) -> bool:
    """重建生成构型后重新提取，确认该轮廓仍然出现"""
    if contour.outer_label != 1:
        return False
    rebuilt = extract_contours(_realize(contour), contour.params)
    return any(c.same_as(contour) and c.external for c in rebuilt)


def _shapes_chunk(codes: List[int], side: int, n: int, pp: PartitionParams) -> List[Tuple[tuple, Contour]]:
    found = []
    for code in codes:
        bits = [(code >> i) & 1 for i in range(side * side)]
        spins = np.where(np.array(bits, dtype=np.int8).reshape(side, side) == 1, -1, 1)
        sigma = SpinConfiguration(spins, (0, 0), outside_value=1)
        for contour in extract_contours(sigma, pp):
            if contour.external and contour.size == n:
                found.append((_shape_key(contour), contour.normalized()))
    return found


@dataclass
class ContourCount:
    """|𝒞_0(n)| 的穷举结果"""
    n: int
    count: int
    box_side: int
    examined: int
    shapes: List[Contour] = field(default_factory=list)

    @property
    def growth(self) -> Optional[float]:
        """log|𝒞_0(n)| / n"""
        if self.count <= 0:
            return None
        return math.log(self.count) / self.n

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n': self.n,
            'count': self.count,
            'shapes': len(self.shapes),
            'growth': self.growth,
            'box_side': self.box_side,
            'examined': self.examined,
        }


def enumerate_contours_at_size(n: int, pp: PartitionParams, jobs: Optional[int] = 1) -> ContourCount:
    """
    穷举 |γ| = n 且包围原点的外部轮廓

    在边长 box_side(n) 的盒子上枚举全部构型（盒外取 +1），收集大小为 n 的外部
    轮廓并按平移去重。每个形状在 |V(γ)| 个平移下满足 0 ∈ V(γ)。

    Args:
        n: 轮廓大小
        pp: 划分参数
        jobs: 进程数

    Raises:
        SizeGuardError: n 超过 8
    """
    if n < 1:
        raise ValueError(f"轮廓大小必须为正: {n}")
    if n > CONTOUR_SIZE_GUARD:
        raise SizeGuardError("轮廓大小", n, CONTOUR_SIZE_GUARD)
    side = box_side(n)
    total = 1 << (side * side)
    worker = partial(_shapes_chunk, side=side, n=n, pp=pp)
    shapes: Dict[tuple, Contour] = {}
    for found in ordered_map(worker, chunked(range(total), 256), jobs):
        for key, contour in found:
            shapes.setdefault(key, contour)
    kept = [c for key, c in sorted(shapes.items(), key=lambda item: item[0]) if is_realizable(c)]
    result = ContourCount(n, sum(len(c.V) for c in kept), side, total, kept)
    logger.info(f"n={n}: {len(kept)} 个形状，|𝒞_0(n)| = {result.count}")
    return result
