"""
平衡过程与 Peierls 映射

从带正边界的构型出发，反复选取层级最小、位置最左的孤立区间并翻转其中的少数自旋，
直到不存在（除包含原点的正孤立区间以外的）孤立区间。
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple

import numpy as np

from ..kernel.configuration import SpinConfiguration
from ..kernel.errors import (
    DimensionMismatchError,
    PreconditionError,
    StepBudgetExceededError,
    StructuralError,
)
from ..intervals.favored import isolation_sign
from ..intervals.interval import DyadicInterval, IntegerInterval, IntervalLike, as_interval, intervals_meeting
from ..intervals.scale import ScaleParams

logger = logging.getLogger(__name__)


class FlipDirection(Enum):
    """翻转方向"""
    TO_PLUS = "to_plus"  # 正孤立区间，负自旋翻为正
    TO_MINUS = "to_minus"  # 负孤立区间，正自旋翻为负

    @property
    def sign(self) -> int:
        return 1 if self is FlipDirection.TO_PLUS else -1

    @classmethod
    def for_sign(cls, sign: int) -> 'FlipDirection':
        return cls.TO_PLUS if sign > 0 else cls.TO_MINUS


@dataclass(frozen=True)
class BalanceStep:
    """平衡过程的一步：选中的区间 B_s、方向和被翻转的格点"""
    step: int
    interval: DyadicInterval
    direction: FlipDirection
    flipped: Tuple[int, ...]

    def to_dict(self) -> Dict:
        return {
            'step': self.step,
            'level': self.interval.level,
            'index': self.interval.index,
            'left': self.interval.left,
            'direction': self.direction.value,
            'flipped_count': len(self.flipped),
        }


@dataclass
class BalanceTrace:
    """
    平衡过程轨迹

    σ^0 为初始构型，σ^s 由前 s 步的翻转重放得到。
    """
    initial: SpinConfiguration
    scale: ScaleParams
    steps: List[BalanceStep] = field(default_factory=list)
    _final: Optional[SpinConfiguration] = field(default=None, repr=False)

    @property
    def S(self) -> int:
        """总步数"""
        return len(self.steps)

    @property
    def final(self) -> SpinConfiguration:
        """最终构型 σ^S"""
        if self._final is None:
            self._final = self.config_at(self.S)
        return self._final

    def config_at(self, s: int) -> SpinConfiguration:
        """重放前 s 步得到 σ^s"""
        if not 0 <= s <= self.S:
            raise ValueError(f"步数 {s} 超出范围 [0, {self.S}]")
        sigma = self.initial
        for step in self.steps[:s]:
            sigma = sigma.set_values(step.flipped, step.direction.sign)
        return sigma

    def configs(self) -> Iterator[SpinConfiguration]:
        """依次给出 σ^0, ..., σ^S"""
        sigma = self.initial
        yield sigma
        for step in self.steps:
            sigma = sigma.set_values(step.flipped, step.direction.sign)
            yield sigma

    def selected(self) -> List[DyadicInterval]:
        return [step.interval for step in self.steps]

    def to_dict(self) -> Dict:
        return {
            'S': self.S,
            'scale': self.scale.to_dict(),
            'steps': [step.to_dict() for step in self.steps],
        }


@dataclass(frozen=True)
class PeierlsResult:
    """Peierls 映射的结果 (I_σ, A_σ)"""
    trace: BalanceTrace
    I_sigma: Optional[DyadicInterval]
    A_sigma: FrozenSet[int]

    @property
    def is_empty(self) -> bool:
        return not self.A_sigma

    def to_dict(self) -> Dict:
        return {
            'S': self.trace.S,
            'I_sigma': None if self.I_sigma is None else [self.I_sigma.level, self.I_sigma.left],
            'A_sigma': sorted(self.A_sigma),
        }


def volume_interval(sigma: SpinConfiguration) -> IntegerInterval:
    """
    体积 Λ 的整数区间

    Raises:
        DimensionMismatchError: 构型不是一维
        PreconditionError: 体积为空或不连续
    """
    if sigma.dimension != 1:
        raise DimensionMismatchError("平衡过程只适用于一维构型")
    sites = np.asarray(sigma.volume_sites(), dtype=np.int64).reshape(-1)
    if sites.size == 0:
        raise PreconditionError("体积为空")
    lo, hi = int(sites.min()), int(sites.max()) + 1
    if sites.size != hi - lo:
        raise PreconditionError("一维体积必须是整数区间")
    return IntegerInterval(lo, hi)


def _check_plus_boundary(sigma: SpinConfiguration, volume: IntegerInterval):
    if sigma.outside_value != 1:
        raise PreconditionError(f"需要正边界条件，当前窗口外取值为 {sigma.outside_value}")
    if 0 not in volume:
        raise PreconditionError(f"体积 {volume} 不包含原点")
    outside_minus = [x for x in sigma.minus_sites() if x not in volume]
    if outside_minus:
        raise PreconditionError(f"体积外存在负自旋: {outside_minus[:5]}")


def max_candidate_level(volume: IntegerInterval) -> int:
    """候选区间层级上界 ⌈log2(32|Λ|)⌉"""
    return math.ceil(math.log2(32 * volume.length))


def step_budget(volume: IntegerInterval) -> int:
    """步数上限，仅用于发现实现错误"""
    n = volume.length
    return max(64, 64 * n * math.ceil(math.log2(max(n, 2))))


def _minority_sites(
    sigma: SpinConfiguration,
    iv: DyadicInterval,
    sign: int,
    volume: IntegerInterval,
) -> Tuple[int, ...]:
    """区间内取值为 -sign 的格点（sign 为孤立类型）"""
    base = iv.interval()
    lo, hi = sigma.bounds()[0]
    if sign < 0 and not volume.contains_interval(base):
        # 体积外的格点永远不会被翻为负
        raise StructuralError(f"负孤立区间 {iv} 伸出体积 {volume}")
    if base.start < lo or base.stop > hi:
        base = IntegerInterval(max(base.start, lo), min(base.stop, hi))
    segment = sigma.spins[base.start - lo:base.stop - lo]
    idx = np.flatnonzero(segment == -sign)
    return tuple(int(base.start + i) for i in idx)


def select_interval(
    sigma: SpinConfiguration,
    sp: ScaleParams,
    volume: IntegerInterval,
    max_level: Optional[int] = None,
) -> Optional[Tuple[DyadicInterval, int]]:
    """
    选出下一步要翻转的区间

    Returns:
        Optional[Tuple[DyadicInterval, int]]: (区间, 孤立类型)，不存在时为 None
    """
    top = max_candidate_level(volume) if max_level is None else max_level
    for level in range(top + 1):
        for candidate in intervals_meeting(level, volume):
            sign = isolation_sign(candidate, sigma, sp)
            if sign is None:
                continue
            if sign > 0 and 0 in candidate:
                continue
            return candidate, sign
    return None


def run_balancing(sigma: SpinConfiguration, sp: ScaleParams, budget: Optional[int] = None) -> BalanceTrace:
    """
    运行平衡过程

    Args:
        sigma: 带正边界的一维构型，体积为包含原点的整数区间
        sp: 尺度参数
        budget: 步数上限，缺省为 max(64, 64|Λ|⌈log2|Λ|⌉)

    Returns:
        BalanceTrace: 完整轨迹

    Raises:
        PreconditionError: 边界不是正的，或体积外有负自旋
        StepBudgetExceededError: 超过步数上限
    """
    volume = volume_interval(sigma)
    _check_plus_boundary(sigma, volume)
    limit = step_budget(volume) if budget is None else budget
    top = max_candidate_level(volume)

    trace = BalanceTrace(initial=sigma, scale=sp)
    current = sigma
    while True:
        choice = select_interval(current, sp, volume, top)
        if choice is None:
            break
        if trace.S >= limit:
            raise StepBudgetExceededError(limit)
        iv, sign = choice
        flipped = _minority_sites(current, iv, sign, volume)
        if not flipped:
            raise StructuralError(f"选中的孤立区间 {iv} 没有可翻转的格点")
        direction = FlipDirection.for_sign(sign)
        trace.steps.append(BalanceStep(trace.S, iv, direction, flipped))
        current = current.set_values(flipped, direction.sign)
        logger.debug(f"第 {trace.S - 1} 步: {iv} {direction.value}, 翻转 {len(flipped)} 个格点")

    trace._final = current
    logger.debug(f"平衡过程结束，共 {trace.S} 步")
    return trace


def smallest_isolated_containing_origin(
    sigma: SpinConfiguration,
    sp: ScaleParams,
    max_level: int,
) -> Optional[DyadicInterval]:
    """包含原点的最小（同层取最左）孤立区间"""
    origin = IntegerInterval(0, 1)
    for level in range(max_level + 1):
        for candidate in intervals_meeting(level, origin):
            if isolation_sign(candidate, sigma, sp) is not None:
                return candidate
    return None


def peierls_map(sigma: SpinConfiguration, sp: ScaleParams, budget: Optional[int] = None) -> PeierlsResult:
    """
    计算 Peierls 映射 (I_σ, A_σ)

    I_σ 为 σ^S 下包含原点的最小孤立区间，A_σ 为其中的负自旋。

    Raises:
        StructuralError: σ_0 = -1 但找不到 I_σ，或 A_σ 不满足 0 ∈ A_σ ⊆ Λ
    """
    trace = run_balancing(sigma, sp, budget)
    volume = volume_interval(sigma)
    final = trace.final
    top = max_candidate_level(volume) + 2
    I_sigma = smallest_isolated_containing_origin(final, sp, top)
    if I_sigma is None:
        if sigma.spin(0) == -1:
            raise StructuralError("σ_0 = -1 时必须存在包含原点的孤立区间")
        return PeierlsResult(trace, None, frozenset())

    base = I_sigma.interval()
    A_sigma = frozenset(x for x in final.minus_sites() if x in base)
    if sigma.spin(0) == -1:
        if 0 not in A_sigma:
            raise StructuralError(f"原点不在 A_σ 中: I_σ={I_sigma}")
        if any(x not in volume for x in A_sigma):
            raise StructuralError(f"A_σ 超出体积 {volume}")
    return PeierlsResult(trace, I_sigma, A_sigma)


def check_tame(iv: IntervalLike, trace: BalanceTrace, T: Optional[int] = None) -> bool:
    """
    区间到第 T 步为止是否温和：对所有 t < T 有 |I ∩ B_t^c| >= |I|/16

    Args:
        iv: 区间
        trace: 平衡轨迹
        T: 截止步数，缺省为 S
    """
    end = trace.S if T is None else T
    if end > trace.S:
        raise ValueError(f"T={end} 超过总步数 {trace.S}")
    base = as_interval(iv)
    need = base.length / 16.0
    for step in trace.steps[:end]:
        outside = base.length - base.intersection_length(step.interval.interval())
        if outside < need:
            return False
    return True
