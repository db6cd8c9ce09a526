"""
粗粒化引理的数值检查
"""

import logging
import math
from itertools import product
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from ..kernel.coupling import CouplingKernel
from ..kernel.errors import PreconditionError
from ..verification.outcome import BoundResult, CheckKind, CheckOutcome
from ..contour.geometry import Point
from .grid import Cube, CubeGrid, cube_neighbors, edge_boundary, reconstruct_from_boundary
from .pyramid import (
    CoarsePyramid,
    build_pyramid,
    interaction_window,
    pair_interaction,
    windowed_interaction,
)

logger = logging.getLogger(__name__)

# 相对误差余量
RELATIVE_SLACK = 1e-9


def b6(alpha: float) -> float:
    """b6 = 1/(16·3^α)"""
    return 1.0 / (16.0 * 3.0 ** alpha)


def b7(alpha: float, r: int) -> float:
    """b7 = b6^(-1)·2^(2r+1)"""
    return 2.0 ** (2 * r + 1) / b6(alpha)


def large_int_bound(alpha: float, ell: int, grid: CubeGrid) -> float:
    """b6·2^(rℓ(4-α))"""
    return b6(alpha) * 2.0 ** (grid.r * ell * (4.0 - alpha))


def no_overlap_check(
    A: Iterable[Point],
    grid: CubeGrid,
    k: CouplingKernel,
    pyramid: Optional[CoarsePyramid] = None,
) -> BoundResult:
    """
    Σ_ℓ Q_ℓ(A) <= J(A)

    J(A) 中的 A^c 取 interaction_window 给出的窗口，两侧使用同一窗口。
    """
    pyr = pyramid or build_pyramid(A, grid, k)
    total = pyr.total_Q
    J_A = windowed_interaction(pyr.base, interaction_window(pyr), k)
    return BoundResult(total, J_A, total <= J_A * (1.0 + RELATIVE_SLACK))


def large_int_check(
    A: Iterable[Point],
    ell: int,
    grid: CubeGrid,
    k: CouplingKernel,
    pyramid: Optional[CoarsePyramid] = None,
) -> List[Tuple[Tuple, BoundResult]]:
    """
    每个边界对 (C, C') ∈ ∂𝔠_ℓ(A) 上 J(A ∩ Ĉ, A^c ∩ Ĉ') >= b6·2^(rℓ(4-α))

    Returns:
        List[Tuple[Tuple, BoundResult]]: (边界对, 结果)，没有边界对时为空
    """
    if ell < 1:
        raise PreconditionError(f"需要 ℓ >= 1: {ell}")
    pyr = pyramid or build_pyramid(A, grid, k)
    if ell >= len(pyr.levels):
        return []
    bound = large_int_bound(k.alpha, ell, grid)
    results = []
    for pair in pyr.level(ell).boundary:
        value = pair_interaction(pyr.base, pair, ell, grid, k)
        results.append((pair, BoundResult(value, bound, value >= bound)))
    return results


def ffs_checks(
    A: Iterable[Point],
    grid: CubeGrid,
    k: CouplingKernel,
    weak: bool = False,
    pyramid: Optional[CoarsePyramid] = None,
) -> List[Dict[str, Any]]:
    """
    逐层检查
        |∂𝔠_ℓ| <= Q_ℓ / (b6 2^(rℓ(4-α)))
        |B_ℓ Δ B_{ℓ+1}| <= b7 2^(rℓ(α-2)) Q_ℓ

    ℓ = 0 时 Q_0 = 0，改用 Q = J(A) 的弱形式（b4 = 1/b6, b5 = b7）；
    weak=True 时所有层都用弱形式。

    Returns:
        List[Dict[str, Any]]: 每层一行
    """
    pyr = pyramid or build_pyramid(A, grid, k)
    alpha, r = k.alpha, grid.r
    J_A = None
    rows = []
    for lv in pyr.levels[:-1]:
        ell = lv.level
        use_weak = weak or ell == 0
        if use_weak and J_A is None:
            J_A = windowed_interaction(pyr.base, interaction_window(pyr), k)
        Q = J_A if use_weak else lv.Q
        boundary_bound = Q / (b6(alpha) * 2.0 ** (r * ell * (4.0 - alpha)))
        diff = len(pyr.B(ell) ^ pyr.B(ell + 1))
        diff_bound = b7(alpha, r) * 2.0 ** (r * ell * (alpha - 2.0)) * Q
        rows.append({
            'level': ell,
            'form': 'weak' if use_weak else 'strong',
            'admissible': len(lv.admissible),
            'boundary': len(lv.boundary),
            'Q': Q,
            'boundary_bound': boundary_bound,
            'boundary_pass': len(lv.boundary) <= boundary_bound * (1.0 + RELATIVE_SLACK),
            'diff': diff,
            'diff_bound': diff_bound,
            'diff_pass': diff <= diff_bound * (1.0 + RELATIVE_SLACK),
        })
    return rows


def edge_pairs_between(S: Set[Cube], T: Set[Cube]) -> int:
    """|∂(𝒞, 𝒞')|：一个在 S 一个在 T 的相邻立方体对个数"""
    return sum(1 for c in S for d in cube_neighbors(c) if d in T)


def iso_check(S: Iterable[Cube], side: int, c: float) -> Tuple[int, float, bool]:
    """
    边长 side 的立方体网格被分成 S 与其补集 S'，
    min(|S|, |S'|) >= c·side^2 时 |∂(S, S')| >= √c·side

    同时检查 |∂S| >= 4√|S|（S 在无限网格中的边界）。

    Raises:
        PreconditionError: 不满足规模门槛或 S 越出网格
    """
    if not 0 < c <= 0.5:
        raise ValueError(f"c 必须在 (0, 0.5] 内: {c}")
    cells = {(i, j) for i in range(side) for j in range(side)}
    first = set(S)
    if not first <= cells:
        raise PreconditionError("S 越出立方体网格")
    second = cells - first
    if min(len(first), len(second)) < c * side * side:
        raise PreconditionError(f"min(|S|, |S'|) = {min(len(first), len(second))} 小于 {c * side * side}")
    boundary = edge_pairs_between(first, second)
    bound = math.sqrt(c) * side
    perimeter_ok = all(len(edge_boundary(part)) >= 4.0 * math.sqrt(len(part)) - 1e-12 for part in (first, second))
    return boundary, bound, boundary >= bound and perimeter_ok


def iso_exhaustive(side: int, c: float) -> Tuple[int, int]:
    """
    穷举 side×side 网格的全部二染色

    Returns:
        Tuple[int, int]: (满足门槛的划分数, 不成立的个数)
    """
    cells = [(i, j) for i in range(side) for j in range(side)]
    examined, failures = 0, 0
    for bits in product((0, 1), repeat=len(cells)):
        S = {cell for cell, b in zip(cells, bits) if b}
        if min(len(S), len(cells) - len(S)) < c * side * side:
            continue
        examined += 1
        if not iso_check(S, side, c)[2]:
            failures += 1
    return examined, failures


def _intersects(box_a: Tuple[Point, Point], box_b: Tuple[Point, Point]) -> bool:
    (a_lo, a_hi), (b_lo, b_hi) = box_a, box_b
    return all(max(a_lo[i], b_lo[i]) < min(a_hi[i], b_hi[i]) for i in range(2))


def nesting_check(grid: CubeGrid, top: int = 2) -> CheckOutcome:
    """
    k > ℓ 时，若 ℓ-边界对嵌在 k-边界对中，则 Ĉ_k ∩ C_ℓ = ∅

    取 C_k = (0, 0)，C'_k 为四个方向的邻居，枚举 C_k 中与 C'_k 相邻的全部 ℓ-立方体。
    """
    problems = []
    checked = 0
    for k_level in range(1, top + 1):
        hat = grid.shrunk_box((0, 0), k_level)
        for ell in range(k_level):
            n = grid.side(k_level) // grid.side(ell)
            edge_cubes = set()
            for t in range(n):
                edge_cubes.update({(0, t), (n - 1, t), (t, 0), (t, n - 1)})
            for c in edge_cubes:
                checked += 1
                if _intersects(hat, grid.cube_box(c, ell)):
                    problems.append((k_level, ell, c))
    return CheckOutcome.hard(
        "coarse.nesting", CheckKind.PROPERTY, not problems,
        f"{len(problems)} 个立方体与 Ĉ 相交" if problems else "",
        details={'checked': checked, 'top': top},
    )


def reconstruction_check(pyramid: CoarsePyramid) -> CheckOutcome:
    """每层 𝔠_ℓ 可由 ∂𝔠_ℓ 唯一还原"""
    bad = [lv.level for lv in pyramid.levels if reconstruct_from_boundary(lv.boundary) != lv.admissible]
    return CheckOutcome.hard(
        "coarse.reconstruction", CheckKind.PROPERTY, not bad,
        f"层级 {bad} 还原失败" if bad else "",
    )


def coarse_outcomes(A: Iterable[Point], grid: CubeGrid, k: CouplingKernel) -> List[CheckOutcome]:
    """一个集合上的全部粗粒化检查"""
    pyramid = build_pyramid(A, grid, k)
    overlap = no_overlap_check(A, grid, k, pyramid)
    outcomes = [CheckOutcome.from_bound("coarse.no_overlap", overlap)]

    pairs = [res for ell in range(1, len(pyramid.levels)) for _, res in large_int_check(A, ell, grid, k, pyramid)]
    failures = [res for res in pairs if not res.passed]
    outcomes.append(CheckOutcome.hard(
        "coarse.large_int", CheckKind.BOUND, not failures,
        f"{len(failures)}/{len(pairs)} 个边界对不成立" if failures else "",
        value=min((res.value for res in pairs), default=None),
        bound=pairs[0].bound if pairs else None,
        details={'pairs': len(pairs)},
    ))

    rows = ffs_checks(A, grid, k, pyramid=pyramid)
    bad = [row['level'] for row in rows if not (row['boundary_pass'] and row['diff_pass'])]
    outcomes.append(CheckOutcome.hard(
        "coarse.ffs", CheckKind.BOUND, not bad,
        f"层级 {bad} 不成立" if bad else "", details={'levels': len(rows)},
    ))
    outcomes.append(reconstruction_check(pyramid))
    return outcomes
