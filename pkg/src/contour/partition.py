"""
(M, a)-划分

划分需满足:
(A) 各部分两两不交且并为 A；
(B) 任意两部分 p, q 满足 d(p, q) > M min{|V(p)|, |V(q)|}^(a/2)。
最细划分由合并到不动点的并查集算法给出。
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from ..kernel.errors import SizeGuardError
from .geometry import Point, hull_size

logger = logging.getLogger(__name__)

# 暴力枚举集合划分的规模上限（Bell 数增长）
BRUTE_FORCE_GUARD = 9


@dataclass(frozen=True)
class PartitionParams:
    """划分参数 M > 0, a > 0"""
    M: float
    a: float

    def __post_init__(self):
        if not self.M > 0:
            raise ValueError(f"M 必须为正: {self.M}")
        if not self.a > 0:
            raise ValueError(f"a 必须为正: {self.a}")

    @classmethod
    def for_alpha(cls, alpha: float, M: float = 1.0) -> 'PartitionParams':
        """a = 6/(α-2)，要求 α > 2"""
        if not alpha > 2:
            raise ValueError(f"二维轮廓需要 α > 2: {alpha}")
        return cls(M=float(M), a=6.0 / (alpha - 2.0))

    def threshold(self, size_p: int, size_q: int) -> float:
        """条件 (B) 右侧 M min{|V(p)|, |V(q)|}^(a/2)"""
        return self.M * float(min(size_p, size_q)) ** (self.a / 2.0)

    def to_dict(self) -> Dict[str, float]:
        return {'M': self.M, 'a': self.a}


class UnionFind:
    """按秩合并、路径压缩的并查集"""

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.rank = [1] * size

    def find(self, u: int) -> int:
        root = u
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[u] != root:
            self.parent[u], u = root, self.parent[u]
        return root

    def union(self, u: int, v: int) -> bool:
        """合并两个集合，已在同一集合时返回 False"""
        root_u = self.find(u)
        root_v = self.find(v)
        if root_u == root_v:
            return False
        if self.rank[root_u] > self.rank[root_v]:
            self.parent[root_v] = root_u
        elif self.rank[root_u] < self.rank[root_v]:
            self.parent[root_u] = root_v
        else:
            self.parent[root_v] = root_u
            self.rank[root_u] += 1
        return True

    def groups(self) -> Dict[int, List[int]]:
        clusters: Dict[int, List[int]] = {}
        for i in range(len(self.parent)):
            clusters.setdefault(self.find(i), []).append(i)
        return clusters


def part_distance(p: Iterable[Point], q: Iterable[Point]) -> float:
    """两个格点集合最近点之间的欧氏距离"""
    P = np.asarray(sorted(p), dtype=np.float64)
    Q = np.asarray(sorted(q), dtype=np.float64)
    return float(cdist(P, Q).min())


def _sorted_parts(parts: Iterable[Iterable[Point]]) -> List[FrozenSet[Point]]:
    return sorted((frozenset(p) for p in parts), key=min)


def finest_partition(
    A: Iterable[Point],
    pp: PartitionParams,
    rng: Optional[np.random.Generator] = None,
) -> List[FrozenSet[Point]]:
    """
    计算 A 的最细 (M, a)-划分

    先合并距离不超过 M 的点对（|V| >= 1，这些对必然违反条件 (B)），
    然后反复合并任意一对违反 (B) 的部分直到不动点。

    Args:
        A: 二维格点集合
        pp: 划分参数
        rng: 可选随机数生成器，用于打乱合并顺序

    Returns:
        List[FrozenSet[Point]]: 各部分，按最小格点排序
    """
    points = sorted(frozenset(A))
    if not points:
        return []
    coords = np.asarray(points, dtype=np.float64)
    uf = UnionFind(len(points))
    for i, j in cKDTree(coords).query_pairs(r=pp.M):
        uf.union(i, j)

    sizes: Dict[int, int] = {}
    merges = 0
    while True:
        groups = uf.groups()
        roots = sorted(groups)
        for root in roots:
            if root not in sizes:
                sizes[root] = hull_size(points[i] for i in groups[root])
        pairs = list(combinations(roots, 2))
        if rng is not None:
            rng.shuffle(pairs)
        merged = False
        for p, q in pairs:
            d = float(cdist(coords[groups[p]], coords[groups[q]]).min())
            if d <= pp.threshold(sizes[p], sizes[q]):
                uf.union(p, q)
                sizes.pop(p)
                sizes.pop(q)
                merges += 1
                merged = True
                break
        if not merged:
            break

    parts = _sorted_parts([points[i] for i in members] for members in uf.groups().values())
    logger.debug(f"{len(points)} 个点划分为 {len(parts)} 部分（不动点合并 {merges} 次）")
    return parts


def partition_is_valid(
    A: Iterable[Point],
    parts: List[FrozenSet[Point]],
    pp: PartitionParams,
) -> bool:
    """检查条件 (A) 与 (B)"""
    sites = frozenset(A)
    union = frozenset().union(*parts) if parts else frozenset()
    if union != sites or sum(len(p) for p in parts) != len(sites):
        return False
    if any(not p for p in parts):
        return False
    sizes = [hull_size(p) for p in parts]
    for i, j in combinations(range(len(parts)), 2):
        if part_distance(parts[i], parts[j]) <= pp.threshold(sizes[i], sizes[j]):
            return False
    return True


def set_partitions(items: List) -> Iterator[List[List]]:
    """枚举列表的全部集合划分"""
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for partition in set_partitions(rest):
        yield [[head]] + partition
        for i in range(len(partition)):
            yield partition[:i] + [[head] + partition[i]] + partition[i + 1:]


def brute_force_finest_partition(A: Iterable[Point], pp: PartitionParams) -> List[FrozenSet[Point]]:
    """
    全部合法划分的交

    Raises:
        SizeGuardError: |A| 超过 9
    """
    points = sorted(frozenset(A))
    if len(points) > BRUTE_FORCE_GUARD:
        raise SizeGuardError("暴力划分的点集", len(points), BRUTE_FORCE_GUARD)
    if not points:
        return []
    signatures: Dict[Point, list] = {x: [] for x in points}
    valid = 0
    for partition in set_partitions(points):
        parts = [frozenset(p) for p in partition]
        if not partition_is_valid(points, parts, pp):
            continue
        valid += 1
        for index, part in enumerate(_sorted_parts(parts)):
            for x in part:
                signatures[x].append(index)
    grouped: Dict[tuple, list] = {}
    for x in points:
        grouped.setdefault(tuple(signatures[x]), []).append(x)
    logger.debug(f"{len(points)} 个点共有 {valid} 个合法划分")
    return _sorted_parts(grouped.values())
