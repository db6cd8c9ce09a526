"""
能量估计证明中各引理的数值检查

在一次 Peierls 映射的轨迹上分别计算引理两侧：
首次相互作用、伪区间扩张、远处相互作用与近处相互作用。
M0 >= 2^10 时为硬断言，否则为比值报告；M'_ℓ < 2 的层级不适用。
"""

import logging
from dataclasses import dataclass
from typing import Dict, List

import numpy as np

from ..kernel.coupling import CouplingKernel
from ..balance.procedure import BalanceStep, FlipDirection, PeierlsResult
from ..intervals.interval import IntegerInterval, expand
from ..verification.outcome import CheckKind, CheckOutcome
from .theta import c_bar_3

logger = logging.getLogger(__name__)

_REL = 1e-9


@dataclass
class _Worst:
    """跟踪最差比值"""
    ratio: float = 0.0
    count: int = 0
    failures: int = 0

    def record(self, lhs: float, rhs: float):
        self.count += 1
        if lhs <= rhs * (1.0 + _REL) + 1e-14:
            ratio = lhs / rhs if rhs > 0 else 0.0
        else:
            self.failures += 1
            ratio = lhs / rhs if rhs > 0 else float('inf')
        self.ratio = max(self.ratio, ratio)


def flip_families(pr: PeierlsResult) -> Dict[FlipDirection, List[BalanceStep]]:
    """
    翻转历史族 𝓕(-, σ) 与 𝓕(+, σ)

    𝓕(-) 由 A_σ 中原本为正的格点的最后翻转区间组成；
    𝓕(+) 由 A_σ 之外原本为负、最终为正的格点的最后翻转区间组成。
    """
    trace = pr.trace
    sigma, final = trace.initial, trace.final
    last: Dict[int, BalanceStep] = {}
    for step in trace.steps:
        for x in step.flipped:
            last[x] = step

    families: Dict[FlipDirection, Dict[tuple, BalanceStep]] = {
        FlipDirection.TO_MINUS: {},
        FlipDirection.TO_PLUS: {},
    }
    for x, step in last.items():
        if x in pr.A_sigma and sigma.spin(x) == 1:
            families[FlipDirection.TO_MINUS].setdefault(step.interval.key(), step)
        elif x not in pr.A_sigma and sigma.spin(x) == -1 and final.spin(x) == 1:
            families[FlipDirection.TO_PLUS].setdefault(step.interval.key(), step)
    return {direction: sorted(group.values(), key=lambda s: s.step) for direction, group in families.items()}


def _outcome(name: str, worst: _Worst, large: bool, note: str = "") -> CheckOutcome:
    if worst.count == 0:
        return CheckOutcome.info(name, CheckKind.BOUND, note or "不适用")
    return CheckOutcome.regime(
        name, CheckKind.BOUND, worst.failures == 0, large,
        f"{worst.failures}/{worst.count} 项不成立" if worst.failures else note,
        value=worst.ratio, bound=1.0, details={'evaluated': worst.count},
    )


def first_interaction_check(pr: PeierlsResult, k: CouplingKernel, cutoff: int) -> CheckOutcome:
    """
    Σ_{x∈A_σ, y∉I_σ} 1{σ_x = σ^S_y = -1} J_xy <= 0.1 J(A_σ, A_σ^c)
    """
    name = "bounds.first_interaction"
    sp = pr.trace.scale
    if not pr.A_sigma:
        return CheckOutcome.info(name, CheckKind.BOUND, "A_σ 为空")
    sigma, final = pr.trace.initial, pr.trace.final
    core = pr.I_sigma.interval()
    xs = [x for x in sorted(pr.A_sigma) if sigma.spin(x) == -1]
    ys = [y for y in final.minus_sites() if y not in core]
    lhs = k.interaction_sum(xs, ys, cutoff)
    rhs = 0.1 * k.complement_interaction(sorted(pr.A_sigma), cutoff)
    worst = _Worst()
    worst.record(lhs, rhs)
    return _outcome(name, worst, sp.is_large_regime)


def fake_interval_expansion_check(pr: PeierlsResult) -> CheckOutcome:
    """对 ℓ < n 的 I_ℓ ∈ 𝓕_ℓ(-)，ρ_{M'_ℓ/2}(I_ℓ) ⊆ I_σ，其中 |I_σ| = 2^n"""
    name = "bounds.fake_interval_expansion"
    sp = pr.trace.scale
    if pr.I_sigma is None:
        return CheckOutcome.info(name, CheckKind.PROPERTY, "I_σ 为空")
    core = pr.I_sigma.interval()
    n = pr.I_sigma.level
    evaluated, broken = 0, []
    for step in flip_families(pr)[FlipDirection.TO_MINUS]:
        level = step.interval.level
        factor = sp.M_prime(level) / 2
        if level >= n or factor < 1:
            continue
        evaluated += 1
        if not core.contains_interval(expand(step.interval, factor)):
            broken.append(str(step.interval))
    if not evaluated:
        return CheckOutcome.info(name, CheckKind.PROPERTY, "不适用")
    return CheckOutcome.regime(
        name, CheckKind.PROPERTY, not broken, sp.is_large_regime,
        f"扩张超出 I_σ: {broken[:5]}" if broken else "",
        details={'evaluated': evaluated},
    )


def _flip_source(step: BalanceStep) -> List[int]:
    """I^+(σ^{s_I})（翻为负）或 I^-(σ^{s_I})（翻为正），即该步翻转的格点"""
    return list(step.flipped)


def _window(iv: IntegerInterval, cutoff: int) -> np.ndarray:
    return np.arange(iv.start - cutoff, iv.stop + cutoff, dtype=np.int64)


def far_interaction_check(pr: PeierlsResult, k: CouplingKernel, cutoff: int) -> CheckOutcome:
    """
    I ∈ 𝓕_ℓ(-), Ĩ = ρ_{M'_ℓ/2}(I), B = Ĩ^c（截断在 I 的 cutoff 邻域内）:
    J(I^+(σ^{s_I}), A^c ∩ B) <= (4/M'_ℓ) J(A ∩ Ĩ, A^c ∩ B) |I^+(σ^{s_I})| / 2^ℓ；
    𝓕_ℓ(+) 的情形中 A 与 A^c 互换。
    """
    name = "bounds.far_interaction"
    sp = pr.trace.scale
    A = np.asarray(sorted(pr.A_sigma), dtype=np.int64)
    worst = _Worst()
    for direction, steps in flip_families(pr).items():
        for step in steps:
            level = step.interval.level
            m_prime = sp.M_prime(level)
            if m_prime < 2:
                continue
            base = step.interval.interval()
            wide = expand(base, m_prime / 2)
            sites = _window(base, cutoff)
            outside = sites[(sites < wide.start) | (sites >= wide.stop)]
            inside = np.arange(wide.start, wide.stop, dtype=np.int64)
            in_A_out = np.isin(outside, A)
            in_A_in = np.isin(inside, A)
            if direction is FlipDirection.TO_MINUS:
                target, near = outside[~in_A_out], inside[in_A_in]
            else:
                target, near = outside[in_A_out], inside[~in_A_in]
            source = _flip_source(step)
            lhs = k.interaction_sum(source, target, cutoff)
            rhs = 4.0 / m_prime * k.interaction_sum(near, target, cutoff) * len(source) / base.length
            worst.record(lhs, rhs)
    return _outcome(name, worst, sp.is_large_regime)


def close_interaction_check(pr: PeierlsResult, k: CouplingKernel, cutoff: int) -> CheckOutcome:
    """
    I ∈ 𝓕_ℓ(-), 1 <= |k| <= M'_ℓ/2, I^k 为第 k 个邻居:
    J(I^+(σ^{s_I}), I^k ∩ A^c) <= c̄3 (M'_ℓ)^(1-α) J(I^k ∩ A, I^k ∩ A^c) |I^+(σ^{s_I})| / 2^ℓ，
    c̄3 = 4^α；𝓕_ℓ(+) 的情形以 I^k ∩ A 为目标。
    """
    name = "bounds.close_interaction"
    sp = pr.trace.scale
    A = pr.A_sigma
    const = c_bar_3(k.alpha)
    worst = _Worst()
    for direction, steps in flip_families(pr).items():
        for step in steps:
            level = step.interval.level
            m_prime = sp.M_prime(level)
            if m_prime < 2:
                continue
            source = _flip_source(step)
            for offset in range(1, m_prime // 2 + 1):
                for kk in (offset, -offset):
                    neighbor = step.interval.neighbor(kk).interval()
                    in_A = [x for x in neighbor if x in A]
                    out_A = [x for x in neighbor if x not in A]
                    target = out_A if direction is FlipDirection.TO_MINUS else in_A
                    lhs = k.interaction_sum(source, target, cutoff)
                    rhs = (
                        const * m_prime ** (1.0 - k.alpha)
                        * k.interaction_sum(in_A, out_A, cutoff) * len(source) / (1 << level)
                    )
                    worst.record(lhs, rhs)
    return _outcome(name, worst, sp.is_large_regime)


def peierls_lemma_outcomes(pr: PeierlsResult, k: CouplingKernel, cutoff: int) -> List[CheckOutcome]:
    """四项引理检查"""
    return [
        first_interaction_check(pr, k, cutoff),
        fake_interval_expansion_check(pr),
        far_interaction_check(pr, k, cutoff),
        close_interaction_check(pr, k, cutoff),
    ]
