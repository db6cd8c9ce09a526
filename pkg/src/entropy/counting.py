"""
像计数与熵估计的数值检查
"""

import logging
from collections import defaultdict
from typing import Any, Dict, FrozenSet, Iterable, List, Optional

from ..kernel.coupling import CouplingKernel
from ..bounds.theta import ThetaParams
from ..verification.outcome import BoundResult, CheckKind, CheckOutcome
from .family import BalancedFamily
from .psi import coarse_sets, psi

logger = logging.getLogger(__name__)

# E(n-3, Q, I_n) 的上界
WHOLE_LEVEL_BOUND = 3 ** 16


def count_images(family: BalancedFamily, ell: int) -> int:
    """E(ℓ) = |{Ψ_ℓ(A) : A ∈ 族}|"""
    return len({psi(A, ell, family.host).key() for A in family.members})


def refinement_counts(family: BalancedFamily, ell: int) -> List[Dict[str, int]]:
    """
    对每个 Ψ_{ℓ+1} 像，统计族内不同 Ψ_ℓ 细化的个数与 |𝒮|

    Returns:
        List[Dict[str, int]]: 每个像一行 {'refinements', 'zero_tiles'}
    """
    groups: Dict[tuple, set] = defaultdict(set)
    zeros: Dict[tuple, int] = {}
    for A in family.members:
        upper = psi(A, ell + 1, family.host)
        groups[upper.key()].add(psi(A, ell, family.host).key())
        zeros[upper.key()] = len(upper.zero_tiles())
    return [{'refinements': len(groups[key]), 'zero_tiles': zeros[key]} for key in sorted(groups)]


def step_entropy_check(family: BalancedFamily, ell: int) -> CheckOutcome:
    """每个 Ψ_{ℓ+1} 像的 Ψ_ℓ 细化个数不超过 3^(2|𝒮|)"""
    rows = refinement_counts(family, ell)
    bad = [r for r in rows if r['refinements'] > 3 ** (2 * r['zero_tiles'])]
    worst = max((r['refinements'] / 3 ** (2 * r['zero_tiles']) for r in rows), default=0.0)
    return CheckOutcome.hard(
        "entropy.step_refinement", CheckKind.BOUND, not bad,
        f"{len(bad)} 个像超出" if bad else "",
        value=worst, bound=1.0, details={'level': ell, 'images': len(rows)},
    )


def whole_level_check(family: BalancedFamily, n: int) -> CheckOutcome:
    """ℓ >= n-3 时 E(ℓ) <= 3^16"""
    ell = max(0, n - 3)
    count = count_images(family, ell)
    return CheckOutcome.hard(
        "entropy.whole_level", CheckKind.BOUND, count <= WHOLE_LEVEL_BOUND,
        value=float(count), bound=float(WHOLE_LEVEL_BOUND), details={'level': ell},
    )


def zero_tile_bound_check(
    A: Iterable[int],
    ell: int,
    k: CouplingKernel,
    tp: ThetaParams,
    c_bar_2: float,
    cutoff: int,
    window=None,
) -> BoundResult:
    """
    |𝒮(A)| <= 2 J(A, A^c) / (c̄2 2^((ℓ+1)θ))，𝒮(A) 为 Ψ_{ℓ+1}(A) = 0 的块
    """
    sites = sorted(set(A))
    count = len(psi(sites, ell + 1, window).zero_tiles())
    if not sites:
        return BoundResult(float(count), 0.0, count == 0)
    J = k.complement_interaction(sites, cutoff)
    bound = 2.0 * J / (c_bar_2 * 2.0 ** ((ell + 1) * tp.theta))
    return BoundResult(float(count), bound, count <= bound + 1e-12)


def coarse_chain_check(A: Iterable[int], n: int) -> CheckOutcome:
    """粗集合链单调，且 |A_ℓ Δ A_{ℓ+1}| <= 2^(ℓ+1) |𝒮(A)|"""
    sites = frozenset(A)
    chain = coarse_sets(sites, n)
    problems = []
    for ell in range(len(chain) - 1):
        lower, upper = chain[ell], chain[ell + 1]
        if not lower <= upper:
            problems.append(f"A_{ell} ⊄ A_{ell + 1}")
        zero = len(psi(sites, ell + 1).zero_tiles())
        if len(lower ^ upper) > (2 << ell) * zero:
            problems.append(f"层级 {ell} 差集过大")
    return CheckOutcome.hard(
        "entropy.coarse_chain", CheckKind.PROPERTY, not problems, "; ".join(problems),
        details={'levels': len(chain)},
    )


def family_count_rows(
    family: BalancedFamily,
    levels: Iterable[int],
    bands: Optional[List[BalancedFamily]] = None,
) -> List[Dict[str, Any]]:
    """族计数的导出行（host, level, Q 区间, count）"""
    rows = []
    for band in [family] + list(bands or []):
        q_low, q_high = band.q_band if band.q_band else (None, None)
        for ell in levels:
            rows.append({
                'host_start': band.host.start,
                'host_stop': band.host.stop,
                'level': ell,
                'q_low': q_low,
                'q_high': q_high,
                'count': count_images(band, ell),
                'members': len(band),
                'sampled': band.sampled,
                'cutoff': band.cutoff,
            })
    return rows


def entropy_outcomes(
    family: BalancedFamily,
    n: int,
    k: CouplingKernel,
    tp: ThetaParams,
    c_bar_2: Optional[float],
    cutoff: int,
) -> List[CheckOutcome]:
    """一个族上的全部熵检查"""
    outcomes = [CheckOutcome.hard(
        "entropy.level0_bijection", CheckKind.IDENTITY,
        count_images(family, 0) == len(family),
        value=float(count_images(family, 0)), bound=float(len(family)),
    )]
    for ell in range(max(0, n - 1)):
        outcomes.append(step_entropy_check(family, ell))
    outcomes.append(whole_level_check(family, n))

    chain_failures = [A for A in family.members if not coarse_chain_check(A, n).passed]
    outcomes.append(CheckOutcome.hard(
        "entropy.coarse_chain", CheckKind.PROPERTY, not chain_failures,
        f"{len(chain_failures)} 个成员不满足" if chain_failures else "",
    ))

    if c_bar_2 is None:
        outcomes.append(CheckOutcome.info("entropy.zero_tile_bound", CheckKind.BOUND, "缺少 c̄2 标定值"))
        return outcomes
    worst, failures, evaluated = 0.0, 0, 0
    for A in family.members:
        for ell in range(max(0, n - 1)):
            result = zero_tile_bound_check(A, ell, k, tp, c_bar_2, cutoff, family.host)
            evaluated += 1
            failures += not result.passed
            if result.bound > 0:
                worst = max(worst, result.ratio)
    outcomes.append(CheckOutcome.regime(
        "entropy.zero_tile_bound", CheckKind.BOUND, failures == 0, family.scale.is_large_regime,
        f"{failures}/{evaluated} 项不成立" if failures else "",
        value=worst, bound=1.0, details={'evaluated': evaluated, 'sampled': family.sampled},
    ))
    return outcomes
