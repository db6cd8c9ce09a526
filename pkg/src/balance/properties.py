"""
平衡过程的性质检查

对已完成的轨迹逐项验证：区间唯一性、冻结核、体积外无负自旋、选中区间长度、
翻转不多（比值报告）、弱偏好保持，以及 Peierls 映射的包含关系与平衡性。
"""

import logging
import math
from fractions import Fraction
from typing import List

import numpy as np

from ..intervals.favored import is_balanced, is_favored
from ..intervals.interval import IntegerInterval, expand
from ..verification.outcome import CheckKind, CheckOutcome, CheckSeverity
from .procedure import BalanceTrace, PeierlsResult, volume_interval

logger = logging.getLogger(__name__)

THREE_HALVES = Fraction(3, 2)


def _spin_history(trace: BalanceTrace) -> np.ndarray:
    """(S+1, 窗口长度) 的自旋历史矩阵"""
    return np.stack([sigma.spins for sigma in trace.configs()]).astype(np.int8)


def check_unique_selection(trace: BalanceTrace) -> CheckOutcome:
    """同一个区间至多被选中一次"""
    keys = [step.interval.key() for step in trace.steps]
    repeated = sorted({k for k in keys if keys.count(k) > 1})
    return CheckOutcome.hard(
        "balance.unique_selection", CheckKind.PROPERTY, not repeated,
        f"重复选中的区间: {repeated}" if repeated else "",
        details={'steps': trace.S},
    )


def check_frozen_cores(trace: BalanceTrace) -> CheckOutcome:
    """区间 I 在第 s_I 步被选中后，之后每一步 ρ_{3/2}(I) 上的构型都是常数"""
    configs = list(trace.configs())
    broken = []
    for step in trace.steps:
        core = expand(step.interval, THREE_HALVES)
        for k, sigma in enumerate(configs[step.step + 1:], start=1):
            plus = sigma.count_in_range(1, core.start, core.stop)
            if plus not in (0, core.length):
                broken.append((step.step, k))
                break
    return CheckOutcome.hard(
        "balance.frozen_cores", CheckKind.PROPERTY, not broken,
        f"冻结核被破坏 (步, 偏移): {broken[:5]}" if broken else "",
    )


def check_no_outside_minus(trace: BalanceTrace) -> CheckOutcome:
    """任何一步都不会在体积外出现负自旋"""
    volume = volume_interval(trace.initial)
    bad_steps = [
        s for s, sigma in enumerate(trace.configs())
        if any(x not in volume for x in sigma.minus_sites())
    ]
    return CheckOutcome.hard(
        "balance.no_outside_minus", CheckKind.PROPERTY, not bad_steps,
        f"体积外出现负自旋的步: {bad_steps[:5]}" if bad_steps else "",
    )


def check_selected_length(trace: BalanceTrace) -> CheckOutcome:
    """选中区间长度小于 32|Λ|"""
    volume = volume_interval(trace.initial)
    limit = 32 * volume.length
    longest = max((step.interval.length for step in trace.steps), default=0)
    return CheckOutcome.hard(
        "balance.selected_length", CheckKind.BOUND, longest < limit,
        value=float(longest), bound=float(limit),
    )


def not_much_flips_report(trace: BalanceTrace) -> CheckOutcome:
    """
    翻转不多的比值报告

    对体积内每个整数区间 I（2^n <= |I| < 2^(n+1)），取 I 保持温和的最大步数 T >= 1，
    若 |I^+(σ)| <= |I|/sqrt(M_n)，则比较 |∪_{t<=T} I^+(σ^t)| 与 c1|I^+(σ)|。
    """
    sp = trace.scale
    volume = volume_interval(trace.initial)
    if trace.S == 0:
        return CheckOutcome.info("balance.not_much_flips", CheckKind.BOUND, "轨迹为空")

    history = _spin_history(trace)
    w0 = trace.initial.bounds()[0][0]
    worst = 0.0
    examined = 0
    violations = 0
    for start in range(volume.start, volume.stop):
        for stop in range(start + 1, volume.stop + 1):
            length = stop - start
            n = length.bit_length() - 1
            cols = history[:, start - w0:stop - w0]
            plus0 = int(np.count_nonzero(cols[0] == 1))
            if plus0 > length / math.sqrt(sp.M(n)):
                continue
            T = _tame_horizon(trace, start, stop)
            if T < 1:
                continue
            union = int(np.count_nonzero(np.any(cols[:T + 1] == 1, axis=0)))
            examined += 1
            allowed = sp.c1 * plus0
            if union > allowed:
                violations += 1
            ratio = union / allowed if allowed > 0 else (math.inf if union else 0.0)
            worst = max(worst, ratio)

    return CheckOutcome(
        "balance.not_much_flips", CheckKind.BOUND, CheckSeverity.WARNING, violations == 0,
        f"检查 {examined} 个区间，{violations} 个超出" if violations else "",
        value=worst, bound=1.0,
        details={'examined': examined, 'violations': violations, 'M0': sp.M0},
    )


def _tame_horizon(trace: BalanceTrace, start: int, stop: int) -> int:
    """区间保持温和的最大步数"""
    base = IntegerInterval(start, stop)
    need = base.length / 16.0
    for step in trace.steps:
        if base.length - base.intersection_length(step.interval.interval()) < need:
            return step.step
    return trace.S


def check_weak_favor_persistence(trace: BalanceTrace) -> CheckOutcome:
    """
    最后一个翻转 x 的区间在 σ^S 下以 σ^S_x 的符号弱受偏好

    M0 >= 2^10 时为硬断言，否则为比值报告。
    """
    sp = trace.scale
    final = trace.final
    last = {}
    for step in trace.steps:
        for x in step.flipped:
            last[x] = step
    failures = []
    for x, step in sorted(last.items()):
        sign = final.spin(x)
        if sign != step.direction.sign:
            failures.append((x, 'sign'))
            continue
        if not is_favored(step.interval, final, sp, sign, weak=True):
            failures.append((x, str(step.interval)))
    return CheckOutcome.regime(
        "balance.weak_favor_persistence", CheckKind.PROPERTY, not failures, sp.is_large_regime,
        f"未保持弱受偏好: {failures[:5]}" if failures else "",
        value=float(len(failures)), bound=float(len(last)),
    )


def check_peierls_result(result: PeierlsResult) -> CheckOutcome:
    """σ_0 = -1 时 I_σ 非空、0 ∈ A_σ ⊆ Λ，且 σ^S 在 ρ_{3/2}(I_σ) 中平衡"""
    sigma = result.trace.initial
    if sigma.spin(0) != -1:
        passed = result.I_sigma is not None or not result.A_sigma
        return CheckOutcome.hard("balance.peierls_map", CheckKind.PROPERTY, passed)
    volume = volume_interval(sigma)
    problems = []
    if result.I_sigma is None:
        problems.append("I_σ 为空")
    else:
        if 0 not in result.A_sigma:
            problems.append("0 不在 A_σ 中")
        if any(x not in volume for x in result.A_sigma):
            problems.append("A_σ 超出 Λ")
        region = expand(result.I_sigma, THREE_HALVES)
        if not is_balanced(region, result.trace.final, result.trace.scale, skip_origin_plus=True):
            problems.append("σ^S 在 ρ_{3/2}(I_σ) 中不平衡")
    return CheckOutcome.hard(
        "balance.peierls_map", CheckKind.PROPERTY, not problems, "; ".join(problems),
        details=result.to_dict(),
    )


def balancing_property_outcomes(result: PeierlsResult, include_ratio_reports: bool = True) -> List[CheckOutcome]:
    """一条轨迹上的全部性质检查"""
    trace = result.trace
    outcomes = [
        check_unique_selection(trace),
        check_frozen_cores(trace),
        check_no_outside_minus(trace),
        check_selected_length(trace),
        check_weak_favor_persistence(trace),
        check_peierls_result(result),
    ]
    if include_ratio_reports:
        outcomes.append(not_much_flips_report(trace))
    failed = [o.name for o in outcomes if o.is_failure]
    if failed:
        logger.info(f"轨迹性质检查未通过: {failed}")
    return outcomes
