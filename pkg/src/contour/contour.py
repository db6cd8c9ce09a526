"""
长程轮廓
轮廓的提取、标签、内部区域、擦除 τ_γ 以及擦除代价检查
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Tuple

import numpy as np

from ..kernel.configuration import SpinConfiguration
from ..kernel.coupling import CouplingKernel
from ..kernel.errors import PreconditionError, StructuralError, WindowTooSmallError
from ..kernel.hamiltonian import HamiltonianParams, flip_energy_difference
from ..verification.outcome import CheckKind, CheckOutcome
from .geometry import Point, holes, incorrect_points, neighbors, require_plus_2d
from .partition import PartitionParams, finest_partition, partition_is_valid

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Contour:
    """
    轮廓 γ = (sp(γ), lab)

    Attributes:
        support: 支撑集 sp(γ)
        spins: 支撑集上的自旋，按格点排序的 (格点, 自旋) 元组
        holes: Z^2 \\ sp(γ) 的有界连通分量
        hole_labels: 每个洞的标签
        outer_label: 无界分量的标签
        params: 生成该轮廓的划分参数
        external: 是否为外部轮廓
    """
    support: FrozenSet[Point]
    spins: Tuple[Tuple[Point, int], ...]
    holes: Tuple[FrozenSet[Point], ...]
    hole_labels: Tuple[int, ...]
    outer_label: int
    params: PartitionParams
    external: bool = False

    @property
    def size(self) -> int:
        """|γ| = |sp(γ)|"""
        return len(self.support)

    @property
    def interior(self) -> FrozenSet[Point]:
        """Int(γ) = V(γ) \\ sp(γ)"""
        return frozenset().union(*self.holes) if self.holes else frozenset()

    @property
    def V(self) -> FrozenSet[Point]:
        return self.support | self.interior

    def _interior_with(self, label: int) -> FrozenSet[Point]:
        parts = [h for h, lab in zip(self.holes, self.hole_labels) if lab == label]
        return frozenset().union(*parts) if parts else frozenset()

    @property
    def int_plus(self) -> FrozenSet[Point]:
        return self._interior_with(1)

    @property
    def int_minus(self) -> FrozenSet[Point]:
        return self._interior_with(-1)

    def same_as(self, other: 'Contour') -> bool:
        """支撑集、支撑上自旋与标签都相同"""
        return (
            self.spins == other.spins
            and self.hole_labels == other.hole_labels
            and self.outer_label == other.outer_label
        )

    def translated(self, shift: Point) -> 'Contour':
        """平移后的轮廓"""
        def move(x: Point) -> Point:
            return (x[0] + shift[0], x[1] + shift[1])
        return Contour(
            frozenset(move(x) for x in self.support),
            tuple((move(x), s) for x, s in self.spins),
            tuple(frozenset(move(x) for x in h) for h in self.holes),
            self.hole_labels,
            self.outer_label,
            self.params,
            self.external,
        )

    def normalized(self) -> 'Contour':
        """平移使支撑集的最小格点落在原点"""
        corner = min(self.support)
        return self.translated((-corner[0], -corner[1]))

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典（JSON Lines 导出用）"""
        return {
            'size': self.size,
            'support': [list(x) for x, _ in self.spins],
            'spins': [s for _, s in self.spins],
            'hole_sizes': [len(h) for h in self.holes],
            'hole_labels': list(self.hole_labels),
            'outer_label': self.outer_label,
            'int_plus': len(self.int_plus),
            'int_minus': len(self.int_minus),
            'V': len(self.V),
            'external': self.external,
            'M': self.params.M,
            'a': self.params.a,
        }


def _read_label(sigma: SpinConfiguration, boundary: Iterable[Point], what: str) -> int:
    signs = {sigma.spin(x) for x in boundary}
    if len(signs) != 1:
        raise StructuralError(f"{what} 的内边界自旋不恒定: {sorted(signs)}")
    return signs.pop()


def decorate(sigma: SpinConfiguration, part: FrozenSet[Point], pp: PartitionParams) -> Contour:
    """
    给划分的一个部分加上从 σ 读出的标签

    Raises:
        StructuralError: 某个补集分量的内边界上自旋不恒定
    """
    components = holes(part)
    filled = set(part)
    labels = []
    for index, hole in enumerate(components):
        inner = [x for x in hole if any(y in part for y in neighbors(x))]
        labels.append(_read_label(sigma, inner, f"洞 {index}"))
        filled |= hole
    outer = {y for x in part for y in neighbors(x) if y not in filled}
    outer_label = _read_label(sigma, outer, "无界分量")
    spins = tuple((x, sigma.spin(x)) for x in sorted(part))
    return Contour(part, spins, tuple(components), tuple(labels), outer_label, pp)


def extract_contours(sigma: SpinConfiguration, pp: PartitionParams) -> List[Contour]:
    """
    Γ(σ)：错误点的最细划分，每部分带上标签并标出外部轮廓

    Raises:
        PreconditionError: 构型不是二维或不是正边界
        StructuralError: 标签不恒定
    """
    require_plus_2d(sigma)
    parts = finest_partition(incorrect_points(sigma), pp)
    contours = [decorate(sigma, part, pp) for part in parts]
    hulls = [c.V for c in contours]
    result = []
    for i, contour in enumerate(contours):
        external = all(not hulls[i] <= hulls[j] for j in range(len(contours)) if j != i)
        result.append(Contour(
            contour.support, contour.spins, contour.holes, contour.hole_labels,
            contour.outer_label, pp, external,
        ))
    logger.debug(f"提取到 {len(result)} 个轮廓，其中外部 {sum(c.external for c in result)} 个")
    return result


def external_contours(sigma: SpinConfiguration, pp: PartitionParams) -> List[Contour]:
    return [c for c in extract_contours(sigma, pp) if c.external]


def erased_sites(gamma: Contour) -> FrozenSet[Point]:
    """τ_γ 实际翻转的格点：支撑上的负自旋以及 Int_-(γ)"""
    minus_support = frozenset(x for x, s in gamma.spins if s == -1)
    return minus_support | gamma.int_minus


def erase_contour(sigma: SpinConfiguration, gamma: Contour) -> SpinConfiguration:
    """
    τ_γ(σ)：Int_+(γ) ∪ V(γ)^c 上不变，Int_-(γ) 上取反，sp(γ) 上取 +1

    Raises:
        StructuralError: γ 不属于 Γ(σ)
        PreconditionError: γ 不是外部轮廓
        WindowTooSmallError: 需要翻转的格点落在窗口外
    """
    matches = [c for c in extract_contours(sigma, gamma.params) if c.same_as(gamma)]
    if not matches:
        raise StructuralError("γ 不属于 Γ(σ)")
    if not matches[0].external:
        raise PreconditionError("只能擦除外部轮廓")
    sites = erased_sites(gamma)
    outside = [x for x in sites if not sigma.contains(x)]
    if outside:
        raise WindowTooSmallError(f"擦除需要翻转窗口外的 {len(outside)} 个格点")
    return sigma.flip(sites)


@dataclass(frozen=True)
class ErasingCost:
    """擦除代价 ΔH = H(σ) - H(τ_γ σ) 与右侧各项"""
    delta_H: float
    size: int
    int_minus_interaction: float

    @property
    def ratio(self) -> float:
        return self.delta_H / (self.size + self.int_minus_interaction)

    @property
    def passed(self) -> bool:
        return self.ratio > 0

    def to_dict(self) -> Dict[str, float]:
        return {
            'delta_H': self.delta_H,
            'size': self.size,
            'int_minus_interaction': self.int_minus_interaction,
            'ratio': self.ratio,
            'passed': self.passed,
        }


def cost_erasing_check(
    sigma: SpinConfiguration,
    gamma: Contour,
    k: CouplingKernel,
    params: Optional[HamiltonianParams] = None,
) -> ErasingCost:
    """
    擦除一个外部轮廓的能量收益

    能量按 ε = 0 计算；比值 ΔH / (|γ| + J(Int_-(γ))) 应为正。
    """
    p = (params or HamiltonianParams.for_dimension(2)).without_field()
    erase_contour(sigma, gamma)
    delta = flip_energy_difference(sigma, erased_sites(gamma), p, k)
    interior = sorted(gamma.int_minus)
    J_int = k.complement_interaction(interior, p.cutoff) if interior else 0.0
    return ErasingCost(delta, gamma.size, J_int)


def cost_erasing_outcome(costs: List[ErasingCost]) -> CheckOutcome:
    """汇总擦除代价：全部比值为正，最小值记为标定的 b1"""
    if not costs:
        return CheckOutcome.info("contour.cost_erasing", CheckKind.BOUND, "没有外部轮廓")
    failures = [c for c in costs if not c.passed]
    b1 = min(c.ratio for c in costs)
    return CheckOutcome.hard(
        "contour.cost_erasing", CheckKind.BOUND, not failures,
        f"{len(failures)} 个轮廓的擦除代价不为正" if failures else "",
        value=b1, bound=0.0, details={'contours': len(costs), 'b1': b1},
    )


def contour_outcomes(
    sigma: SpinConfiguration,
    pp: PartitionParams,
    k: CouplingKernel,
    params: Optional[HamiltonianParams] = None,
) -> Tuple[List[Contour], List[CheckOutcome]]:
    """
    一个构型上的轮廓检查：划分合法、τ_γ 的三种情形逐点成立、擦除代价为正
    """
    contours = extract_contours(sigma, pp)
    support = incorrect_points(sigma)
    outcomes = [CheckOutcome.hard(
        "contour.partition_valid", CheckKind.PROPERTY,
        partition_is_valid(support, [c.support for c in contours], pp),
        details={'contours': len(contours), 'incorrect': len(support)},
    )]

    problems = []
    costs = []
    for gamma in (c for c in contours if c.external):
        erased = erase_contour(sigma, gamma)
        for x in gamma.V:
            if not sigma.contains(x):
                continue
            expected = 1 if x in gamma.support else (-sigma.spin(x) if x in gamma.int_minus else sigma.spin(x))
            if erased.spin(x) != expected:
                problems.append(x)
        changed = np.argwhere(erased.spins != sigma.spins)
        origin = np.asarray(sigma.origin)
        if any(tuple(int(v) for v in row + origin) not in gamma.V for row in changed):
            problems.append(min(gamma.support))
        costs.append(cost_erasing_check(sigma, gamma, k, params))
    outcomes.append(CheckOutcome.hard(
        "contour.erase_contract", CheckKind.PROPERTY, not problems,
        f"{len(problems)} 个格点不符" if problems else "",
    ))
    outcomes.append(cost_erasing_outcome(costs))
    return contours, outcomes


def contour_rows(contours: List[Contour]) -> List[Dict[str, Any]]:
    return [c.to_dict() for c in contours]

