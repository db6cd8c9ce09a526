"""
ℓ-立方体网格
C_ℓ(x) 为边长 2^(rℓ) 的对齐立方体，按 (层级, 行号, 列号) 编号
"""

from collections import Counter
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Set, Tuple

from ..contour.geometry import Point

Cube = Tuple[int, int]
CubePair = Tuple[Cube, Cube]


@dataclass(frozen=True)
class CubeGrid:
    """
    立方体网格

    Attributes:
        r: 尺度参数，必须为大于4的整数
    """
    r: int = 5

    def __post_init__(self):
        if int(self.r) != self.r or self.r <= 4:
            raise ValueError(f"r 必须是大于4的整数: {self.r}")

    def side(self, ell: int) -> int:
        """ℓ-立方体边长 2^(rℓ)"""
        if ell < 0:
            raise ValueError(f"层级不能为负: {ell}")
        return 1 << (self.r * ell)

    def cube_of(self, x: Point, ell: int) -> Cube:
        """包含 x 的 ℓ-立方体编号"""
        shift = self.r * ell
        return (x[0] >> shift, x[1] >> shift)

    def cube_box(self, c: Cube, ell: int) -> Tuple[Point, Point]:
        """立方体的 [lower, upper) 坐标范围"""
        s = self.side(ell)
        return (c[0] * s, c[1] * s), ((c[0] + 1) * s, (c[1] + 1) * s)

    def cube_sites(self, c: Cube, ell: int) -> List[Point]:
        (lo0, lo1), (hi0, hi1) = self.cube_box(c, ell)
        return [(i, j) for i in range(lo0, hi0) for j in range(lo1, hi1)]

    def shrunk_box(self, c: Cube, ell: int) -> Tuple[Point, Point]:
        """
        Ĉ：去掉厚度 2^(r(ℓ-1)) 的外层

        ℓ = 0 时外层厚度为分数，立方体内没有剩余的整点，返回空范围。
        """
        (lo0, lo1), (hi0, hi1) = self.cube_box(c, ell)
        if ell == 0:
            return (lo0, lo1), (lo0, lo1)
        t = self.side(ell - 1)
        return (lo0 + t, lo1 + t), (hi0 - t, hi1 - t)

    def shrunk_side(self, ell: int) -> int:
        """Ĉ 的边长 2^(rℓ) - 2·2^(r(ℓ-1))，ℓ = 0 时为0"""
        if ell == 0:
            return 0
        return self.side(ell) - 2 * self.side(ell - 1)


def shrunk_cube(c: Cube, ell: int, grid: CubeGrid) -> List[Point]:
    """Ĉ 中的全部格点"""
    (lo0, lo1), (hi0, hi1) = grid.shrunk_box(c, ell)
    return [(i, j) for i in range(lo0, hi0) for j in range(lo1, hi1)]


def cube_neighbors(c: Cube) -> List[Cube]:
    return [(c[0] + 1, c[1]), (c[0] - 1, c[1]), (c[0], c[1] + 1), (c[0], c[1] - 1)]


def cube_counts(A: Iterable[Point], ell: int, grid: CubeGrid) -> Counter:
    """每个 ℓ-立方体中 A 的格点数"""
    return Counter(grid.cube_of(x, ell) for x in A)


def admissible_cubes(A: Iterable[Point], ell: int, grid: CubeGrid) -> FrozenSet[Cube]:
    """𝔠_ℓ(A)：|C ∩ A| >= |C|/2 的 ℓ-立方体"""
    volume = grid.side(ell) ** 2
    return frozenset(c for c, n in cube_counts(A, ell, grid).items() if 2 * n >= volume)


def approximation(A: Iterable[Point], ell: int, grid: CubeGrid) -> FrozenSet[Point]:
    """B_ℓ(A)：可容许立方体的并"""
    return frozenset(x for c in admissible_cubes(A, ell, grid) for x in grid.cube_sites(c, ell))


def edge_boundary(S: Iterable[Cube]) -> List[CubePair]:
    """
    ∂(S)：共边且一个在 S 内一个在 S 外的立方体对 (内, 外)

    Returns:
        List[CubePair]: 按字典序排序
    """
    cubes: Set[Cube] = set(S)
    pairs = [(c, d) for c in cubes for d in cube_neighbors(c) if d not in cubes]
    return sorted(pairs)


def reconstruct_from_boundary(pairs: Iterable[CubePair]) -> FrozenSet[Cube]:
    """
    由边界对还原立方体集合

    沿每一行向右，穿过竖直边界的次数为奇数的立方体属于集合。
    """
    edges: dict = {}
    for inside, outside in pairs:
        if inside[0] != outside[0]:
            continue
        row = inside[0]
        edges.setdefault(row, []).append(min(inside[1], outside[1]))
    cubes = set()
    for row, positions in edges.items():
        positions.sort()
        for left, right in zip(positions[0::2], positions[1::2]):
            cubes.update((row, j) for j in range(left + 1, right + 1))
    return frozenset(cubes)
