"""
平衡集合族 𝒜(I_n)

成员 A 为某个在 I_n 中平衡的构型的负自旋集合，构型在 I_n 之外取正。
"""

import logging
from dataclasses import dataclass, field, replace
from functools import partial
from typing import Any, Dict, FrozenSet, List, Optional, Tuple

import numpy as np

from ..kernel.configuration import SpinConfiguration
from ..kernel.coupling import CouplingKernel
from ..kernel.errors import SizeGuardError
from ..intervals.favored import is_balanced
from ..intervals.interval import IntegerInterval, IntervalLike, as_interval
from ..intervals.scale import ScaleParams
from ..core.parallel import chunked, ordered_map

logger = logging.getLogger(__name__)

ENUMERATION_GUARD = 20


@dataclass
class BalancedFamily:
    """平衡集合族及其可选的 Q 区间 [Q, 2Q)"""
    host: IntegerInterval
    scale: ScaleParams
    members: List[FrozenSet[int]] = field(default_factory=list)
    sampled: bool = False
    q_band: Optional[Tuple[float, float]] = None
    cutoff: Optional[int] = None
    attempts: int = 0

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, A) -> bool:
        return frozenset(A) in set(self.members)

    def realize(self, A: FrozenSet[int]) -> SpinConfiguration:
        """A 的 ± 指示构型（窗口为宿主区间）"""
        return indicator_configuration(A, self.host)

    def with_q_band(self, Q: float, k: CouplingKernel, cutoff: int) -> 'BalancedFamily':
        """只保留 J(A, A^c) ∈ [Q, 2Q) 的成员"""
        kept = []
        for A in self.members:
            value = k.complement_interaction(sorted(A), cutoff) if A else 0.0
            if Q <= value < 2 * Q:
                kept.append(A)
        return replace(self, members=kept, q_band=(Q, 2 * Q), cutoff=cutoff)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'host': [self.host.start, self.host.stop],
            'size': len(self.members),
            'sampled': self.sampled,
            'q_band': list(self.q_band) if self.q_band else None,
            'cutoff': self.cutoff,
            'attempts': self.attempts,
        }


def indicator_configuration(A: FrozenSet[int], host: IntegerInterval) -> SpinConfiguration:
    return SpinConfiguration.from_minus_sites(sorted(A), host.start, host.stop)


def _code_to_set(code: int, host: IntegerInterval) -> FrozenSet[int]:
    return frozenset(host.start + i for i in range(host.length) if (code >> i) & 1)


def _balanced_chunk(codes: List[int], host: IntegerInterval, sp: ScaleParams) -> List[int]:
    kept = []
    for code in codes:
        sigma = indicator_configuration(_code_to_set(code, host), host)
        if is_balanced(host, sigma, sp):
            kept.append(code)
    return kept


def enumerate_balanced(host: IntervalLike, sp: ScaleParams, jobs: Optional[int] = 1) -> BalancedFamily:
    """
    穷举 𝒜(I_n)

    Args:
        host: 宿主区间 I_n
        sp: 尺度参数
        jobs: 进程数

    Raises:
        SizeGuardError: 宿主区间超过 20 个格点
    """
    base = as_interval(host)
    if base.length > ENUMERATION_GUARD:
        raise SizeGuardError("平衡集合族宿主区间", base.length, ENUMERATION_GUARD)
    worker = partial(_balanced_chunk, host=base, sp=sp)
    family = BalancedFamily(base, sp, attempts=1 << base.length)
    for codes in ordered_map(worker, chunked(range(1 << base.length), 2048), jobs):
        family.members.extend(_code_to_set(code, base) for code in codes)
    logger.debug(f"{base}: {len(family)} 个平衡集合（共 {family.attempts} 个）")
    return family


def sample_balanced(
    host: IntervalLike,
    sp: ScaleParams,
    n_samples: int,
    rng: np.random.Generator,
) -> BalancedFamily:
    """
    在宿主区间上均匀抽取构型，保留平衡的实现（去重）

    结果标记为抽样，不代表完整的族。
    """
    base = as_interval(host)
    family = BalancedFamily(base, sp, sampled=True, attempts=n_samples)
    seen = set()
    for _ in range(n_samples):
        bits = rng.integers(0, 2, size=base.length)
        A = frozenset(base.start + int(i) for i in np.flatnonzero(bits))
        if A in seen:
            continue
        if is_balanced(base, indicator_configuration(A, base), sp):
            seen.add(A)
            family.members.append(A)
    logger.info(f"{base}: 抽样 {n_samples} 次，得到 {len(family)} 个不同的平衡集合")
    return family


def q_grid(c2: float, theta: float, n: int, count: int) -> List[float]:
    """Q 网格：c2 2^(θn) 乘以 2 的幂"""
    floor = c2 * 2.0 ** (theta * n)
    return [floor * 2.0 ** j for j in range(count)]
