"""
立方体内部正负混合的相互作用下界探测

在边长 2^(rL) 的立方体中恰好放 m 个负自旋，用模拟退火最小化 J(C+, C-)，
与 √(m+1)·ln(m+1) 的增长趋势比较。
"""

import logging
import math
from dataclasses import dataclass
from functools import partial
from itertools import combinations
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..kernel.coupling import CouplingKernel
from ..kernel.errors import PreconditionError
from ..core.parallel import ordered_map, spawn_rngs
from .grid import CubeGrid

logger = logging.getLogger(__name__)

# 放置方式不超过此数时直接穷举
EXACT_PLACEMENTS = 4096


@dataclass
class AnnealSchedule:
    """几何降温: T_i = t0 * ratio^i，直到 t_min"""
    t0: float = 1.0
    t_min: float = 1e-4
    steps: int = 20000

    @property
    def ratio(self) -> float:
        return (self.t_min / self.t0) ** (1.0 / max(1, self.steps - 1))


def cube_coupling(side: int, k: CouplingKernel) -> np.ndarray:
    """立方体内全部格点之间的耦合矩阵"""
    coords = np.indices((side, side)).reshape(2, -1).T
    return k.pair_matrix(coords)


def mixing_energy(J: np.ndarray, minus: np.ndarray) -> float:
    """J(C+, C-)，minus 为负自旋的下标"""
    mask = np.zeros(J.shape[0], dtype=bool)
    mask[minus] = True
    return float(J[np.ix_(mask, ~mask)].sum())


def _anneal(rng: np.random.Generator, J: np.ndarray, m: int, schedule: AnnealSchedule) -> Tuple[float, List[int]]:
    n = J.shape[0]
    R = J.sum(axis=1)
    minus = list(rng.choice(n, size=m, replace=False))
    in_minus = np.zeros(n, dtype=bool)
    in_minus[minus] = True
    F = J[:, minus].sum(axis=1)
    energy = float(R[minus].sum() - F[minus].sum())
    best, best_set = energy, list(minus)
    T = schedule.t0
    ratio = schedule.ratio
    for _ in range(schedule.steps):
        i = int(rng.integers(m))
        x = minus[i]
        y = int(rng.integers(n))
        if in_minus[y]:
            T *= ratio
            continue
        # 交换 x (负) 与 y (正) 后的能量变化
        delta = R[y] - R[x] + 2.0 * F[x] - 2.0 * F[y] + 2.0 * J[x, y]
        if delta <= 0 or rng.random() < math.exp(-delta / T):
            minus[i] = y
            in_minus[x], in_minus[y] = False, True
            F += J[:, y] - J[:, x]
            energy += delta
            if energy < best:
                best, best_set = energy, list(minus)
        T *= ratio
    return best, sorted(int(v) for v in best_set)


def _exact_minimum(J: np.ndarray, m: int) -> Tuple[float, List[int]]:
    R = J.sum(axis=1)
    best, best_set = math.inf, []
    for minus in combinations(range(J.shape[0]), m):
        idx = list(minus)
        value = float(R[idx].sum() - J[np.ix_(idx, idx)].sum())
        if value < best:
            best, best_set = value, list(minus)
    return best, best_set


@dataclass
class MixingProbe:
    """一次探测的结果"""
    side: int
    m: int
    minimum: float
    argmin: List[Tuple[int, int]]
    exact: bool
    restarts: int

    @property
    def curve(self) -> float:
        """√(m+1)·ln(m+1)"""
        return math.sqrt(self.m + 1) * math.log(self.m + 1)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'side': self.side,
            'm': self.m,
            'min_J': self.minimum,
            'curve': self.curve,
            'ratio': self.minimum / self.curve if self.curve > 0 else None,
            'exact': self.exact,
            'restarts': self.restarts,
        }


def _grid_power(side: int, grid: CubeGrid) -> int:
    L = 1
    while grid.side(L) < side:
        L += 1
    if grid.side(L) != side:
        raise PreconditionError(f"边长 {side} 不是 2^(rL) 的形式 (r={grid.r})")
    return L


def cube_mixing_bound_probe(
    side: int,
    m: int,
    k: CouplingKernel,
    grid: Optional[CubeGrid] = None,
    trials: int = 4,
    seed: Optional[int] = 0,
    schedule: Optional[AnnealSchedule] = None,
    jobs: Optional[int] = 1,
) -> MixingProbe:
    """
    最小化边长 side 的立方体中恰有 m 个负自旋时的 J(C+, C-)

    放置方式不超过 4096 种时穷举，否则做 trials 次独立的模拟退火，
    每次使用由 seed 派生的独立随机流，取最小值。

    Raises:
        PreconditionError: α 不等于3，或边长不是网格的幂
    """
    grid = grid or CubeGrid()
    if k.dimension != 2 or k.alpha != 3:
        raise PreconditionError(f"探测只针对二维 α = 3，得到 α = {k.alpha}")
    _grid_power(side, grid)
    n = side * side
    if not 0 <= m <= n:
        raise ValueError(f"m 必须在 [0, {n}] 内: {m}")
    if m == 0 or m == n:
        return MixingProbe(side, m, 0.0, [], True, 0)

    J = cube_coupling(side, k)
    if math.comb(n, m) <= EXACT_PLACEMENTS:
        value, minus = _exact_minimum(J, m)
        exact, restarts = True, 0
    else:
        worker = partial(_anneal, J=J, m=m, schedule=schedule or AnnealSchedule())
        results = ordered_map(worker, spawn_rngs(seed, trials), jobs)
        value, minus = min(results, key=lambda item: item[0])
        exact, restarts = False, trials
    argmin = [divmod(int(i), side) for i in minus]
    logger.info(f"side={side}, m={m}: min J(C+, C-) = {value:.6g}{'（穷举）' if exact else ''}")
    return MixingProbe(side, m, value, argmin, exact, restarts)


def fit_mixing_constant(probes: List[MixingProbe]) -> Dict[str, float]:
    """
    最小二乘拟合 min_J ≈ c·√(m+1)·ln(m+1)

    Returns:
        Dict[str, float]: c、相对残差的最大值，以及回归下界 b8 = min(min_J / 曲线)
    """
    usable = [p for p in probes if p.curve > 0]
    if not usable:
        raise ValueError("没有 m >= 1 的探测结果")
    f = np.array([p.curve for p in usable])
    y = np.array([p.minimum for p in usable])
    c = float(f @ y / (f @ f))
    residual = float(np.max(np.abs(y - c * f) / (c * f))) if c > 0 else math.inf
    return {'c': c, 'residual': residual, 'b8': float(np.min(y / f))}
