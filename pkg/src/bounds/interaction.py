"""
一维相互作用下界
"""

import logging
from fractions import Fraction
from typing import Iterable, Optional

from ..kernel.configuration import SpinConfiguration
from ..kernel.coupling import CouplingKernel
from ..kernel.errors import PreconditionError
from ..intervals.favored import is_balanced
from ..intervals.interval import IntervalLike, as_interval, expand
from ..intervals.scale import ScaleParams
from ..verification.outcome import BoundResult
from .theta import ThetaParams, c_bar_1

logger = logging.getLogger(__name__)

_SLACK = 1e-12


def _split(iv: IntervalLike, sigma: SpinConfiguration):
    base = as_interval(iv)
    minus = [x for x in base if sigma.spin(x) == -1]
    plus = [x for x in base if sigma.spin(x) == 1]
    return minus, plus


def min_interaction_lower_bound_check(iv: IntervalLike, sigma: SpinConfiguration, k: CouplingKernel) -> BoundResult:
    """
    J(I^-, I^+) >= c̄1 m^(2-α)，m = min(|I^-|, |I^+|)

    Returns:
        BoundResult: (J(I^-, I^+), c̄1 m^(2-α), 是否成立)
    """
    minus, plus = _split(iv, sigma)
    m = min(len(minus), len(plus))
    bound = c_bar_1(k.alpha) * m ** (2.0 - k.alpha) if m else 0.0
    value = k.interaction_sum(minus, plus)
    return BoundResult(value, bound, value >= bound - _SLACK)


def set_interaction_lower_bound_check(A: Iterable[int], k: CouplingKernel, cutoff: int) -> BoundResult:
    """
    J(A, A^c) >= c̄1 |A|^(2-α)，A^c 在半径 cutoff 处截断

    Raises:
        PreconditionError: A 为空
    """
    sites = sorted(set(A))
    if not sites:
        raise PreconditionError("A 不能为空")
    value = k.complement_interaction(sites, cutoff)
    bound = c_bar_1(k.alpha) * len(sites) ** (2.0 - k.alpha)
    return BoundResult(value, bound, value >= bound - _SLACK)


def mixed_interaction(region: IntervalLike, sigma: SpinConfiguration, k: CouplingKernel) -> float:
    """区域内异号无序对的相互作用 Σ_{x<y} 1{σ_x≠σ_y} J_xy"""
    minus, plus = _split(region, sigma)
    return k.interaction_sum(minus, plus)


def balanced_interaction_check(
    iv: IntervalLike,
    sigma: SpinConfiguration,
    sp: ScaleParams,
    tp: ThetaParams,
    k: CouplingKernel,
    c_bar_2: float,
    region: Optional[IntervalLike] = None,
) -> BoundResult:
    """
    平衡区间上的异号相互作用 >= c̄2 |I|^θ

    Args:
        iv: 区间 I
        sigma: 在 ρ_{3/2}(I) 中平衡且在 I 上非常数的构型
        sp: 尺度参数
        tp: θ 参数
        k: 耦合核
        c_bar_2: 标定得到的常数
        region: 求和区域，缺省为 ρ_{3/2}(I)

    Raises:
        PreconditionError: 构型在 I 上为常数或在 ρ_{3/2}(I) 中不平衡
    """
    base = as_interval(iv)
    area = expand(base, Fraction(3, 2)) if region is None else as_interval(region)
    minus, plus = _split(base, sigma)
    if not minus or not plus:
        raise PreconditionError(f"构型在 {base} 上为常数")
    if not is_balanced(area, sigma, sp):
        raise PreconditionError(f"构型在 {area} 中不平衡")
    value = mixed_interaction(area, sigma, k)
    bound = c_bar_2 * tp.power(base.length)
    return BoundResult(value, bound, value >= bound - _SLACK)
