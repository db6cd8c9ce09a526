"""
误差泛函 Δ_A 的检查
尾部界、好事件、伸缩和恒等式、翻转保测性、反对称性与截断不敏感性
"""

import logging
import math
from dataclasses import dataclass
from functools import partial
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..kernel.coupling import CouplingKernel, Site
from ..kernel.errors import PreconditionError, SizeGuardError
from ..kernel.hamiltonian import hamiltonian
from ..verification.outcome import BoundResult, CheckKind, CheckOutcome
from ..contour.contour import Contour, erased_sites
from ..entropy.family import BalancedFamily
from ..entropy.psi import coarse_sets
from ..coarse.grid import CubeGrid
from ..coarse.pyramid import build_pyramid
from ..core.parallel import chunked, ordered_map, spawn_rngs
from .field import DisorderField, sample_field
from .gibbs import ExactGibbs, delta_A

logger = logging.getLogger(__name__)

TAIL_GUARD = 14
FLIP_WEIGHT_GUARD = 10

# 恒等式检查的相对余量
IDENTITY_SLACK = 1e-9

# 尾部检查每个任务的样本数与每次 logsumexp 的批大小
_TAIL_CHUNK = 4096
_TAIL_BATCH = 512


def _close(lhs: float, rhs: float) -> bool:
    return abs(lhs - rhs) <= IDENTITY_SLACK * max(1.0, abs(lhs), abs(rhs))


# ---- 次高斯尾部 ----

@dataclass
class TailResult:
    """ℙ(|Δ_A - Δ_A'| > λ) 的蒙特卡罗估计"""
    empirical: float
    bound: float
    stderr: float
    samples: int
    sym_diff: int
    epsilon: float
    lam: float
    seed: Optional[int]

    @property
    def passed(self) -> bool:
        return self.empirical <= self.bound + 3.0 * self.stderr

    def to_dict(self) -> Dict[str, Any]:
        return {
            'sym_diff': self.sym_diff,
            'epsilon': self.epsilon,
            'lambda': self.lam,
            'samples': self.samples,
            'seed': self.seed,
            'empirical': self.empirical,
            'stderr': self.stderr,
            'bound': self.bound,
            'pass': self.passed,
        }


def tail_bound(lam: float, epsilon: float, sym_diff: int) -> float:
    """2 exp(-λ²/(8ε²|AΔA'|))；差恒为0时取0"""
    if sym_diff == 0 or epsilon == 0:
        return 0.0
    return 2.0 * math.exp(-lam * lam / (8.0 * epsilon * epsilon * sym_diff))


def _tail_chunk(job: Tuple[np.random.Generator, int], g: ExactGibbs, idx_A: np.ndarray, idx_B: np.ndarray, lam: float) -> int:
    rng, count = job
    eps = g.params.epsilon
    exceed = 0
    for start in range(0, count, _TAIL_BATCH):
        size = min(_TAIL_BATCH, count - start)
        H = eps * rng.standard_normal((size, g.n))
        HA, HB = H.copy(), H.copy()
        HA[:, idx_A] *= -1.0
        HB[:, idx_B] *= -1.0
        # Δ_A - Δ_A' = (log Z(τ_A h) - log Z(τ_A' h)) / β
        diff = (g.log_partition_batch(HA) - g.log_partition_batch(HB)) / g.beta
        exceed += int(np.sum(np.abs(diff) > lam))
    return exceed


def tail_check(
    g: ExactGibbs,
    A: Iterable[Site],
    A_prime: Iterable[Site],
    lam: float,
    n_samples: int,
    seed: Optional[int] = 0,
    jobs: Optional[int] = 1,
) -> TailResult:
    """
    估计 ℙ(|Δ_A - Δ_A'| > λ)，与 2exp(-λ²/(8ε²|AΔA'|)) 比较

    每 4096 个样本为一个任务，各任务使用由 seed 派生的独立随机流，
    结果与 jobs 无关。外场强度取 g.params.epsilon。

    Raises:
        SizeGuardError: |Λ| > 14
    """
    if g.n > TAIL_GUARD:
        raise SizeGuardError("尾部检查窗口", g.n, TAIL_GUARD)
    if not lam > 0:
        raise ValueError(f"λ 必须为正: {lam}")
    if g.beta <= 0:
        raise PreconditionError("β = 0 时 Δ_A 没有定义")
    idx_A, idx_B = g.flat_index(A), g.flat_index(A_prime)
    sym_diff = len(np.setxor1d(idx_A, idx_B))
    eps = g.params.epsilon
    bound = tail_bound(lam, eps, sym_diff)

    if sym_diff == 0 or eps == 0:
        exceed = 0
    else:
        counts = [len(c) for c in chunked(range(n_samples), _TAIL_CHUNK)]
        jobs_list = list(zip(spawn_rngs(seed, len(counts)), counts))
        worker = partial(_tail_chunk, g=g, idx_A=idx_A, idx_B=idx_B, lam=lam)
        exceed = sum(ordered_map(worker, jobs_list, jobs))

    p = exceed / n_samples if n_samples else 0.0
    stderr = math.sqrt(p * (1.0 - p) / n_samples) if n_samples else 0.0
    result = TailResult(p, bound, stderr, n_samples, sym_diff, eps, lam, seed)
    logger.info(f"|AΔA'|={sym_diff}, ε={eps}, λ={lam}: 经验尾部 {p:.5f}，上界 {bound:.5f}")
    return result


def tail_outcome(results: List[TailResult]) -> CheckOutcome:
    failures = [r for r in results if not r.passed]
    return CheckOutcome.hard(
        "disorder.tail", CheckKind.STATISTICAL, not failures,
        f"{len(failures)}/{len(results)} 个参数组合超出上界" if failures else "",
        details={'cells': len(results)},
    )


# ---- 好事件 ----

@dataclass(frozen=True)
class GoodEventConstants:
    """
    好事件的阈值常数

    fraction: 一维阈值 J(A, A^c) 的系数
    b1: 二维阈值 b1(|γ| + J(Int_-(γ)))/4 中的常数
    """
    fraction: float = 0.1
    b1: Optional[float] = None


@dataclass
class GoodEventResult:
    """一个外场样本上的好事件"""
    holds: bool
    checked: int
    failures: int
    worst_margin: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'holds': self.holds,
            'checked': self.checked,
            'failures': self.failures,
            'worst_margin': self.worst_margin,
        }


FamilyLike = Union[BalancedFamily, Sequence[FrozenSet[Site]], Sequence[Contour]]


def _event_members(g: ExactGibbs, family: FamilyLike, constants: GoodEventConstants) -> List[Tuple[FrozenSet[Site], float]]:
    members = list(family.members if isinstance(family, BalancedFamily) else family)
    cutoff = g.params.cutoff
    pairs = []
    for item in members:
        if isinstance(item, Contour):
            if constants.b1 is None:
                raise PreconditionError("二维好事件需要常数 b1")
            interior = sorted(item.int_minus)
            J_int = g.kernel.complement_interaction(interior, cutoff) if interior else 0.0
            A = erased_sites(item)
            pairs.append((A, constants.b1 * (item.size + J_int) / 4.0))
        else:
            A = frozenset(item)
            J_A = g.kernel.complement_interaction(sorted(A), cutoff) if A else 0.0
            pairs.append((A, constants.fraction * J_A))
    return pairs


def good_event_eval(
    g: ExactGibbs,
    h: Optional[DisorderField],
    family: FamilyLike,
    constants: Optional[GoodEventConstants] = None,
) -> GoodEventResult:
    """
    对给定外场判断族中每个 A 是否满足 Δ_A(h) <= 阈值

    一维族的成员是格点集合，阈值为 fraction·J(A, A^c)；
    二维族的成员是轮廓 γ，A 为擦除 γ 时翻转的格点，阈值为 b1(|γ| + J(Int_-(γ)))/4。
    """
    constants = constants or GoodEventConstants()
    failures, worst = 0, math.inf
    pairs = _event_members(g, family, constants)
    for A, threshold in pairs:
        margin = threshold - delta_A(g, h, A)
        worst = min(worst, margin)
        if margin < 0:
            failures += 1
    return GoodEventResult(failures == 0, len(pairs), failures, worst)


def _event_seed(job: Tuple[int, float], g: ExactGibbs, family: FamilyLike, constants: GoodEventConstants) -> bool:
    seed, epsilon = job
    h = sample_field(g.shape, seed, epsilon, g.origin)
    return good_event_eval(g.with_params(epsilon=epsilon), h, family, constants).holds


def event_frequency(
    g: ExactGibbs,
    family: FamilyLike,
    epsilons: Sequence[float],
    seeds: Sequence[int],
    constants: Optional[GoodEventConstants] = None,
    jobs: Optional[int] = 1,
) -> List[Dict[str, Any]]:
    """
    好事件在各 ε 下的频率

    Returns:
        List[Dict[str, Any]]: 每个 ε 一行，记录使用的种子范围
    """
    constants = constants or GoodEventConstants()
    seeds = [int(s) for s in seeds]
    jobs_list = [(s, float(eps)) for eps in epsilons for s in seeds]
    worker = partial(_event_seed, g=g, family=family, constants=constants)
    holds = ordered_map(worker, jobs_list, jobs)
    rows = []
    for i, eps in enumerate(epsilons):
        block = holds[i * len(seeds):(i + 1) * len(seeds)]
        freq = sum(block) / len(block) if block else 0.0
        rows.append({
            'epsilon': float(eps),
            'seeds': len(block),
            'first_seed': seeds[0] if seeds else None,
            'last_seed': seeds[-1] if seeds else None,
            'frequency': freq,
        })
        logger.info(f"ε={eps}: 好事件频率 {freq:.3f}")
    return rows


# ---- 恒等式 ----

def telescoping_check(g: ExactGibbs, h: Optional[DisorderField], chain: Sequence[Iterable[Site]]) -> CheckOutcome:
    """
    Δ_{A_0} = Σ_ℓ (Δ_{A_ℓ} - Δ_{A_{ℓ+1}}) + Δ_{A_top}

    chain 的每一项都必须在 Λ 内；空集的 Δ 为0。
    """
    sets = [list(A) for A in chain]
    if not sets:
        raise PreconditionError("伸缩链为空")
    deltas = [delta_A(g, h, A) for A in sets]
    rhs = sum(deltas[i] - deltas[i + 1] for i in range(len(deltas) - 1)) + deltas[-1]
    return CheckOutcome.hard(
        "disorder.telescoping", CheckKind.IDENTITY, _close(deltas[0], rhs),
        value=deltas[0], bound=rhs, details={'links': len(sets)},
    )


def chain_1d(A: Iterable[int], n: int) -> List[FrozenSet[int]]:
    """一维粗集合链，末尾补空集"""
    return coarse_sets(A, n) + [frozenset()]


def chain_2d(A: Iterable[Site], grid: CubeGrid, k: CouplingKernel) -> List[FrozenSet[Site]]:
    """二维近似链 B_0, B_1, ...，末层 B_{top+1} 为空集"""
    pyramid = build_pyramid(A, grid, k)
    return [pyramid.B(ell) for ell in range(len(pyramid.levels))]


def antisymmetry_check(g: ExactGibbs, h: DisorderField, A: Iterable[Site]) -> CheckOutcome:
    """Δ_A(τ_A h) = -Δ_A(h)"""
    sites = list(A)
    forward = delta_A(g, h, sites)
    backward = delta_A(g, h.flipped(sites), sites)
    return CheckOutcome.hard(
        "disorder.antisymmetry", CheckKind.IDENTITY, _close(forward, -backward),
        value=forward, bound=-backward,
    )


def flip_weight_check(g: ExactGibbs, h: DisorderField, A: Iterable[Site]) -> CheckOutcome:
    """
    H(σ; h) - H(τ_A σ; τ_A h) = H_0(σ) - H_0(τ_A σ) 对 Λ 上全部 σ 逐项成立

    两侧都用哈密顿量函数直接计算，不经过枚举缓存。

    Raises:
        SizeGuardError: |Λ| > 10
    """
    if g.n > FLIP_WEIGHT_GUARD:
        raise SizeGuardError("翻转保测检查窗口", g.n, FLIP_WEIGHT_GUARD)
    sites = list(A)
    g.flat_index(sites)
    with_field = g.params.with_field(h.values, h.epsilon)
    with_flipped = g.params.with_field(h.flipped(sites).values, h.epsilon)
    bare = g.params.without_field()
    worst = 0.0
    for code in range(1 << g.n):
        sigma = g.configuration(code)
        tau = sigma.flip(sites)
        lhs = hamiltonian(sigma, with_field, g.kernel) - hamiltonian(tau, with_flipped, g.kernel)
        rhs = hamiltonian(sigma, bare, g.kernel) - hamiltonian(tau, bare, g.kernel)
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs)))
    return CheckOutcome.hard(
        "disorder.flip_weight", CheckKind.IDENTITY, worst <= IDENTITY_SLACK,
        value=worst, bound=IDENTITY_SLACK, details={'configurations': 1 << g.n},
    )


def cutoff_doubling_check(g: ExactGibbs, h: DisorderField, A: Iterable[Site], factor: int = 2) -> BoundResult:
    """
    截断半径放大 factor 倍时 Δ_A 的变化不超过 2|Λ|·tail(R)

    边界场的变化同时进入分子与分母，每个 log Z 至多变化 β Σ_x |δb_x|。
    """
    sites = list(A)
    base = delta_A(g, h, sites)
    wider = delta_A(g.with_params(cutoff=int(g.params.cutoff * factor)), h, sites)
    bound = 2.0 * g.n * g.kernel.tail_bound(g.params.cutoff)
    change = abs(base - wider)
    return BoundResult(change, bound, change <= bound)


def disorder_outcomes(
    g: ExactGibbs,
    h: DisorderField,
    A: Iterable[Site],
    chain: Optional[Sequence[Iterable[Site]]] = None,
) -> List[CheckOutcome]:
    """一个外场样本上的全部恒等式检查"""
    sites = list(A)
    outcomes = [antisymmetry_check(g, h, sites)]
    if chain is not None:
        outcomes.append(telescoping_check(g, h, chain))
    if g.n <= FLIP_WEIGHT_GUARD:
        outcomes.append(flip_weight_check(g, h, sites))
    # 二维尾部界要求 R > 2√2
    if g.kernel.dimension == 1 or g.params.cutoff > 2.0 * math.sqrt(2.0):
        doubling = cutoff_doubling_check(g, h, sites)
        outcomes.append(CheckOutcome.from_bound("disorder.cutoff_doubling", doubling))
    return outcomes
