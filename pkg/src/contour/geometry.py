"""
二维格点几何
错误点、V(A) 填洞以及补集连通分量
"""

from typing import FrozenSet, Iterable, List, Tuple

import numpy as np
from scipy import ndimage

from ..kernel.configuration import SpinConfiguration
from ..kernel.errors import PreconditionError

Point = Tuple[int, int]

# 最近邻位移
NEIGHBOR_OFFSETS = ((1, 0), (-1, 0), (0, 1), (0, -1))


def neighbors(x: Point) -> List[Point]:
    """x 的四个最近邻"""
    return [(x[0] + di, x[1] + dj) for di, dj in NEIGHBOR_OFFSETS]


def require_plus_2d(sigma: SpinConfiguration):
    """
    二维轮廓只在正边界下定义

    Raises:
        PreconditionError: 构型不是二维或边界值不是 +1
    """
    if sigma.dimension != 2:
        raise PreconditionError(f"轮廓需要二维构型，得到 {sigma.dimension} 维")
    if sigma.outside_value != 1:
        raise PreconditionError(f"轮廓需要正边界，得到边界值 {sigma.outside_value}")


def incorrect_points(sigma: SpinConfiguration) -> FrozenSet[Point]:
    """
    ∂σ = {x : 存在最近邻 y 使 σ_x = -σ_y}

    窗口外取边界值，所以结果可以包含窗口外一圈的格点。

    Args:
        sigma: 二维、正边界的构型

    Returns:
        FrozenSet[Point]: 错误点集合
    """
    require_plus_2d(sigma)
    padded = np.pad(sigma.spins, 1, mode='constant', constant_values=sigma.outside_value)
    mask = np.zeros(padded.shape, dtype=bool)
    vertical = padded[1:, :] != padded[:-1, :]
    horizontal = padded[:, 1:] != padded[:, :-1]
    mask[1:, :] |= vertical
    mask[:-1, :] |= vertical
    mask[:, 1:] |= horizontal
    mask[:, :-1] |= horizontal
    rows, cols = np.nonzero(mask)
    o0, o1 = sigma.origin
    return frozenset((int(i) + o0 - 1, int(j) + o1 - 1) for i, j in zip(rows, cols))


def _bounding_grid(A: FrozenSet[Point]) -> Tuple[np.ndarray, Tuple[int, int]]:
    # 外扩一圈的包围盒，返回掩码与左上角坐标
    coords = np.array(sorted(A), dtype=np.int64)
    lo = coords.min(axis=0) - 1
    hi = coords.max(axis=0) + 1
    mask = np.zeros(tuple(hi - lo + 1), dtype=bool)
    mask[tuple((coords - lo).T)] = True
    return mask, (int(lo[0]), int(lo[1]))


def holes(A: Iterable[Point]) -> List[FrozenSet[Point]]:
    """
    Z^2 \\ A 的有界连通分量（四连通）

    在外扩一圈的包围盒上标记补集的连通分量，碰到边框的分量属于无界分量。

    Returns:
        List[FrozenSet[Point]]: 每个洞一个集合，按最小格点排序
    """
    sites = frozenset(A)
    if not sites:
        return []
    mask, (lo0, lo1) = _bounding_grid(sites)
    labels, count = ndimage.label(~mask)
    border = np.concatenate([labels[0, :], labels[-1, :], labels[:, 0], labels[:, -1]])
    exterior = set(int(v) for v in np.unique(border)) - {0}
    result = []
    for label in range(1, count + 1):
        if label in exterior:
            continue
        rows, cols = np.nonzero(labels == label)
        result.append(frozenset((int(i) + lo0, int(j) + lo1) for i, j in zip(rows, cols)))
    result.sort(key=min)
    return result


def hull(A: Iterable[Point]) -> FrozenSet[Point]:
    """
    V(A)：A 本身加上被 A 与无穷远隔开的格点

    Examples:
        >>> sorted(hull({(0, 0)}))
        [(0, 0)]
    """
    sites = frozenset(A)
    filled = set(sites)
    for hole in holes(sites):
        filled |= hole
    return frozenset(filled)


def hull_size(A: Iterable[Point]) -> int:
    """|V(A)|"""
    sites = frozenset(A)
    return len(sites) + sum(len(h) for h in holes(sites))


def box_sites(lower: Point, upper: Point) -> FrozenSet[Point]:
    """[lower, upper) 盒子内的全部格点"""
    return frozenset((i, j) for i in range(lower[0], upper[0]) for j in range(lower[1], upper[1]))
