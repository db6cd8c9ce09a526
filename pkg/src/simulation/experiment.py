"""
磁化实验
在 (α, β, ε) 网格上估计 μ⁺(σ_0 = -1)，以及链的平稳分布检查
"""

import logging
import math
from dataclasses import dataclass, replace
from itertools import product
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..kernel.coupling import CouplingKernel
from ..kernel.errors import SizeGuardError
from ..kernel.hamiltonian import HamiltonianParams
from ..verification.outcome import CheckKind, CheckOutcome
from ..disorder.field import DisorderField, sample_field
from ..disorder.gibbs import ExactGibbs
from ..core.parallel import keyed_rng, make_rng, ordered_map
from ..core.progress_monitor import ProgressMonitor
from .chain import ChainState, metropolis_sweep

logger = logging.getLogger(__name__)

STATIONARY_GUARD = 12

# 定理成立的 α 范围 (下界, 上界, 上界是否可取)
THEOREM_RANGES = {1: (1.0, 1.5, False), 2: (2.0, 3.0, True)}


def in_theorem_range(alpha: float, dimension: int) -> bool:
    lo, hi, closed = THEOREM_RANGES[dimension]
    return lo < alpha and (alpha <= hi if closed else alpha < hi)


def centered_window(dimension: int, side: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """边长 side 的窗口，原点位于中心附近"""
    shape = (side,) * dimension
    origin = (-(side // 2),) * dimension
    return shape, origin


@dataclass(frozen=True)
class ChainJob:
    """一条链的全部输入"""
    alpha: float
    beta: float
    epsilon: float
    dimension: int
    side: int
    field_seed: int
    chain: int
    root_seed: int
    sweeps: int
    cutoff: Optional[int] = None


def kept_sweeps(sweeps: int) -> int:
    """
    丢弃前一半后保留的扫描数，多于一次时取偶数

    β = 0 时每次扫描都翻转 σ_0，偶数个样本的估计恰为 0.5。
    """
    kept = sweeps - sweeps // 2
    if kept > 1 and kept % 2:
        kept -= 1
    return kept


def run_chain(job: ChainJob) -> float:
    """
    运行一条从全正构型出发的链

    Returns:
        float: 后一半扫描中 σ_0 = -1 的比例
    """
    shape, origin = centered_window(job.dimension, job.side)
    kernel = CouplingKernel(job.alpha, job.dimension)
    params = HamiltonianParams.for_dimension(job.dimension, beta=job.beta, epsilon=job.epsilon)
    if job.cutoff is not None:
        params = replace(params, cutoff=job.cutoff)
    h = sample_field(shape, job.field_seed, job.epsilon, origin) if job.epsilon else None
    state = ChainState.start(shape, kernel, params, keyed_rng(job.root_seed, job.field_seed, job.chain), h, origin)
    center = state.flat_index(0 if job.dimension == 1 else (0, 0))
    burn_in = job.sweeps - kept_sweeps(job.sweeps)
    hits, kept = 0, 0
    for t in range(job.sweeps):
        metropolis_sweep(state, job.beta)
        if t >= burn_in:
            kept += 1
            hits += state.spins[center] < 0
    return hits / kept if kept else 0.0


def _summarize(values: List[float]) -> Tuple[float, float]:
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        return math.nan, math.nan
    stderr = float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else 0.0
    return float(arr.mean()), stderr


def magnetization_experiment(
    alphas: Sequence[float],
    betas: Sequence[float],
    epsilons: Sequence[float],
    dimension: int = 1,
    side: int = 32,
    field_seeds: Sequence[int] = (0,),
    chains: int = 2,
    sweeps: int = 1000,
    seed: int = 0,
    cutoff: Optional[int] = None,
    jobs: Optional[int] = 1,
    monitor: Optional[ProgressMonitor] = None,
) -> List[Dict[str, Any]]:
    """
    估计每个 (α, β, ε) 下的 μ⁺(σ_0 = -1)

    每个外场种子上运行 chains 条链，丢弃前一半扫描。
    误差条取全部 (外场, 链) 结果的标准误。α 超出定理范围时只记录警告。

    Returns:
        List[Dict[str, Any]]: 每个网格点一行
    """
    cells = list(product(alphas, betas, epsilons))
    field_seeds = [int(s) for s in field_seeds]
    if monitor:
        monitor.start(len(cells), "simulate")
    rows = []
    for i, (alpha, beta, eps) in enumerate(cells):
        if not in_theorem_range(alpha, dimension):
            logger.warning(f"α = {alpha} 不在 {dimension} 维定理的参数范围内")
        chain_jobs = [
            ChainJob(float(alpha), float(beta), float(eps), dimension, side, fs, c, seed, sweeps, cutoff)
            for fs in field_seeds for c in range(chains)
        ]
        estimate, stderr = _summarize(ordered_map(run_chain, chain_jobs, jobs))
        rows.append({
            'alpha': float(alpha),
            'beta': float(beta),
            'epsilon': float(eps),
            'seed': seed,
            'field_seeds': len(field_seeds),
            'chains': chains,
            'estimate': estimate,
            'stderr': stderr,
            'sweeps': sweeps,
            'kept': kept_sweeps(sweeps),
            'in_range': in_theorem_range(alpha, dimension),
        })
        logger.info(f"α={alpha}, β={beta}, ε={eps}: μ̂ = {estimate:.4f} ± {stderr:.4f}")
        if monitor:
            monitor.update(i + 1, f"α={alpha}, β={beta}, ε={eps}")
    if monitor:
        monitor.complete("磁化实验完成")
    return rows


def infinite_temperature_check(rows: List[Dict[str, Any]]) -> CheckOutcome:
    """
    β = 0 的行估计值与 0.5 相差不超过 max(3 个标准误, 1/(2·保留扫描数))

    所有链在 β = 0 时完全相同，标准误为 0，容差取单个样本的分辨率。
    """
    zero = [r for r in rows if r['beta'] == 0]
    bad = []
    for r in zero:
        gap = abs(r['estimate'] - 0.5)
        kept = r.get('kept') or kept_sweeps(r['sweeps'])
        if gap > max(3.0 * r['stderr'], 0.5 / max(1, kept)) + 1e-12:
            bad.append(r)
    if not zero:
        return CheckOutcome.info("simulation.beta_zero", CheckKind.STATISTICAL, "没有 β = 0 的网格点")
    return CheckOutcome.hard(
        "simulation.beta_zero", CheckKind.STATISTICAL, not bad,
        f"{len(bad)} 个网格点偏离 0.5" if bad else "", details={'cells': len(zero)},
    )


def trend_check(
    rows: List[Dict[str, Any]],
    axis: str,
    increasing: bool,
    z: float = 2.0,
    name: Optional[str] = None,
) -> CheckOutcome:
    """
    沿 axis（'beta' 或 'epsilon'）排序后，相邻估计值的变化方向超过 z 个合并标准误

    其余两个参数相同的行分为一组。
    """
    others = [key for key in ('alpha', 'beta', 'epsilon') if key != axis]
    groups: Dict[Tuple, List[Dict[str, Any]]] = {}
    for r in rows:
        groups.setdefault(tuple(r[key] for key in others), []).append(r)
    bad = []
    for key, group in groups.items():
        group = sorted(group, key=lambda r: r[axis])
        for a, b in zip(group, group[1:]):
            step = (b['estimate'] - a['estimate']) * (1 if increasing else -1)
            if step <= z * math.hypot(a['stderr'], b['stderr']):
                bad.append((key, a[axis], b[axis]))
    direction = "递增" if increasing else "递减"
    return CheckOutcome.hard(
        name or f"simulation.trend_{axis}", CheckKind.STATISTICAL, not bad,
        f"{len(bad)} 处不满足{direction}" if bad else "",
        details={'groups': len(groups), 'z': z},
    )


def stationary_tv_check(
    g: ExactGibbs,
    h: Optional[DisorderField],
    sweeps: int,
    seed: Optional[int] = 0,
    burn_in: int = 100,
    tolerance: float = 0.01,
) -> CheckOutcome:
    """
    链在小窗口上的经验分布与精确吉布斯测度的全变差距离

    Raises:
        SizeGuardError: |Λ| > 12
    """
    if g.n > STATIONARY_GUARD:
        raise SizeGuardError("平稳分布检查窗口", g.n, STATIONARY_GUARD)
    state = ChainState.from_gibbs(g, make_rng(seed), h)
    for _ in range(burn_in):
        metropolis_sweep(state, g.beta)
    counts = np.zeros(1 << g.n, dtype=np.int64)
    for _ in range(sweeps):
        metropolis_sweep(state, g.beta)
        counts[state.code()] += 1
    empirical = counts / max(1, sweeps)
    tv = 0.5 * float(np.abs(empirical - g.probabilities(h)).sum())
    logger.info(f"|Λ|={g.n}, {sweeps} 次扫描: 全变差距离 {tv:.5f}")
    return CheckOutcome.hard(
        "simulation.stationary_tv", CheckKind.STATISTICAL, tv <= tolerance,
        value=tv, bound=tolerance, details={'sweeps': sweeps, 'seed': seed},
    )
