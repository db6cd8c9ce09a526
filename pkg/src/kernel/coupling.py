"""
长程耦合核
J_xy = |x-y|^(-alpha)，以及点集之间的相互作用求和
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Tuple, Union

import numpy as np

from .errors import DimensionMismatchError

logger = logging.getLogger(__name__)

Site = Union[int, Tuple[int, int]]

# 分块求和时单块的最大元素数
_CHUNK_ELEMENTS = 1 << 22


def site_dimension(site: Site) -> int:
    """返回格点的维度（一维格点是整数）"""
    if isinstance(site, (int, np.integer)):
        return 1
    return len(site)


def as_coords(sites: Union[Iterable[Site], np.ndarray], dimension: int) -> np.ndarray:
    """
    把格点集合转换为 (n, d) 整数坐标数组

    Args:
        sites: 格点可迭代对象或已有的坐标数组
        dimension: 维度（1或2）

    Returns:
        np.ndarray: 形状为 (n, d) 的 int64 数组
    """
    if isinstance(sites, np.ndarray):
        arr = sites.astype(np.int64, copy=False)
        if arr.ndim == 1 and dimension == 1:
            return arr.reshape(-1, 1)
        if arr.ndim == 2 and arr.shape[1] == dimension:
            return arr
        if arr.size == 0:
            return np.zeros((0, dimension), dtype=np.int64)
        raise DimensionMismatchError(f"坐标数组形状 {arr.shape} 与维度 {dimension} 不符")

    items = list(sites)
    if not items:
        return np.zeros((0, dimension), dtype=np.int64)
    for item in items:
        if site_dimension(item) != dimension:
            raise DimensionMismatchError(f"格点 {item} 不是 {dimension} 维的")
    if dimension == 1:
        return np.asarray(items, dtype=np.int64).reshape(-1, 1)
    return np.asarray(items, dtype=np.int64).reshape(-1, dimension)


def coords_to_sites(coords: np.ndarray) -> list:
    """坐标数组转回格点列表（一维为整数，二维为元组）"""
    if coords.shape[1] == 1:
        return [int(v) for v in coords[:, 0]]
    return [tuple(int(v) for v in row) for row in coords]


@lru_cache(maxsize=64)
def _self_sum(alpha: float, dimension: int, cutoff: int) -> float:
    # S_R = sum over 0 < |v| <= R of |v|^(-alpha)
    if dimension == 1:
        k = np.arange(1, cutoff + 1, dtype=np.float64)
        return float(2.0 * np.sum(k ** -alpha))
    axis = np.arange(-cutoff, cutoff + 1, dtype=np.float64)
    sq = axis[:, None] ** 2 + axis[None, :] ** 2
    sq[cutoff, cutoff] = np.inf
    mask = sq <= float(cutoff) ** 2
    return float(np.sum(sq[mask] ** (-alpha / 2.0)))


@dataclass(frozen=True)
class CouplingKernel:
    """
    耦合核
    alpha 必须大于维度以保证模型正则
    """
    alpha: float
    dimension: int = 1

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise ValueError(f"不支持的维度: {self.dimension}")
        if not self.alpha > self.dimension:
            raise ValueError(f"alpha={self.alpha} 必须大于维度 {self.dimension}")

    def coupling(self, x: Site, y: Site) -> float:
        """单对格点的耦合强度"""
        if site_dimension(x) != self.dimension or site_dimension(y) != self.dimension:
            raise DimensionMismatchError(f"格点 {x}, {y} 与核维度 {self.dimension} 不符")
        if self.dimension == 1:
            dist = abs(int(x) - int(y))
        else:
            dist = math.hypot(x[0] - y[0], x[1] - y[1])
        if dist == 0:
            return 0.0
        return dist ** -self.alpha

    def pair_matrix(
        self,
        X: np.ndarray,
        Y: Optional[np.ndarray] = None,
        cutoff: Optional[float] = None,
    ) -> np.ndarray:
        """
        两组坐标之间的耦合矩阵

        Args:
            X: (n, d) 坐标
            Y: (m, d) 坐标，缺省时取 X
            cutoff: 截断半径，距离大于它的项置零

        Returns:
            np.ndarray: (n, m) 矩阵，对角（距离为0）为0
        """
        X = as_coords(X, self.dimension)
        Y = X if Y is None else as_coords(Y, self.dimension)
        diff = X[:, None, :].astype(np.float64) - Y[None, :, :].astype(np.float64)
        dist = np.sqrt(np.sum(diff * diff, axis=-1))
        zero = dist == 0
        dist[zero] = 1.0
        weights = dist ** -self.alpha
        weights[zero] = 0.0
        if cutoff is not None:
            weights[dist > cutoff] = 0.0
        return weights

    def interaction_sum(
        self,
        A: Union[Iterable[Site], np.ndarray],
        B: Union[Iterable[Site], np.ndarray],
        cutoff: Optional[float] = None,
    ) -> float:
        """
        J(A, B) = sum_{x in A, y in B} J_xy

        Args:
            A: 第一个点集
            B: 第二个点集
            cutoff: 可选截断半径

        Returns:
            float: 相互作用总和
        """
        X = as_coords(A, self.dimension)
        Y = as_coords(B, self.dimension)
        if len(X) == 0 or len(Y) == 0:
            return 0.0
        rows = max(1, _CHUNK_ELEMENTS // len(Y))
        total = 0.0
        for start in range(0, len(X), rows):
            total += float(np.sum(self.pair_matrix(X[start:start + rows], Y, cutoff)))
        return total

    def self_sum(self, cutoff: int) -> float:
        """单点与截断半径内所有其他格点的耦合总和 S_R"""
        return _self_sum(float(self.alpha), self.dimension, int(cutoff))

    def complement_interaction(
        self,
        A: Union[Iterable[Site], np.ndarray],
        cutoff: int,
    ) -> float:
        """
        J(A, A^c)，A^c 取整个格点空间并在半径 cutoff 处截断

        计算方式为 |A| * S_R 减去 A 内部（半径 R 内）的有序对之和。
        """
        X = as_coords(A, self.dimension)
        if len(X) == 0:
            return 0.0
        inner = self.interaction_sum(X, X, cutoff=cutoff)
        return len(X) * self.self_sum(cutoff) - inner

    def tail_bound(self, cutoff: float) -> float:
        """
        单点截断尾部的解析上界

        一维: 2 R^(1-alpha) / (alpha-1)
        二维: 8 (R/sqrt(2) - 1)^(2-alpha) / (alpha-2)，要求 R > 2*sqrt(2)
        """
        if self.dimension == 1:
            return 2.0 * cutoff ** (1.0 - self.alpha) / (self.alpha - 1.0)
        base = cutoff / math.sqrt(2.0) - 1.0
        if base <= 1.0:
            raise ValueError(f"截断半径 {cutoff} 过小，无法给出二维尾部界")
        return 8.0 * base ** (2.0 - self.alpha) / (self.alpha - 2.0)


def coupling(x: Site, y: Site, k: CouplingKernel) -> float:
    """J_xy"""
    return k.coupling(x, y)


def interaction_sum(A, B, k: CouplingKernel, cutoff: Optional[float] = None) -> float:
    """J(A, B)"""
    return k.interaction_sum(A, B, cutoff=cutoff)
