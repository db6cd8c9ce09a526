"""
常数标定

对只以存在性给出的常数（c̄2, c2）在小规模上穷举最小化相关比值。
之后的检查以标定值为回归基准。
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..kernel.configuration import SpinConfiguration
from ..kernel.coupling import CouplingKernel
from ..kernel.errors import SizeGuardError
from ..intervals.favored import is_balanced
from ..intervals.interval import IntegerInterval, expand
from ..intervals.scale import ScaleParams
from ..balance.procedure import peierls_map
from ..core.parallel import chunked, ordered_map
from .interaction import mixed_interaction
from .theta import ThetaParams

logger = logging.getLogger(__name__)

CALIBRATION_GUARD = 20


@dataclass
class CalibrationResult:
    """一次标定的结果"""
    name: str
    alpha: float
    delta: float
    M0: float
    value: float
    examined: int = 0
    argmin: Optional[List[int]] = None
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.examined > 0 and np.isfinite(self.value)

    def to_record(self) -> Dict[str, Any]:
        """常数文件中的一条记录"""
        return {
            'name': self.name,
            'alpha': self.alpha,
            'delta': self.delta,
            'M0': self.M0,
            'value': float(self.value),
        }

    def to_dict(self) -> Dict[str, Any]:
        data = self.to_record()
        data.update({'examined': self.examined, 'argmin': self.argmin, 'details': self.details})
        return data


def _bits_to_spins(code: int, size: int) -> np.ndarray:
    bits = (code >> np.arange(size)) & 1
    return np.where(bits == 1, -1, 1).astype(np.int8)


def _c_bar_2_chunk(codes: List[int], length: int, sp: ScaleParams, alpha: float, theta: float) -> Tuple[float, int, Optional[int]]:
    k = CouplingKernel(alpha, 1)
    base = IntegerInterval(0, length)
    region = expand(base, Fraction(3, 2))
    offset = base.start - region.start
    best, count, arg = np.inf, 0, None
    norm = float(length) ** theta
    for code in codes:
        spins = _bits_to_spins(code, region.length)
        core = spins[offset:offset + length]
        if np.all(core == core[0]):
            continue
        sigma = SpinConfiguration(spins, origin=region.start, outside_value=1)
        if not is_balanced(region, sigma, sp):
            continue
        count += 1
        ratio = mixed_interaction(region, sigma, k) / norm
        if ratio < best:
            best, arg = ratio, code
    return best, count, arg


def calibrate_c_bar_2(
    max_length: int,
    sp: ScaleParams,
    k: CouplingKernel,
    tp: ThetaParams,
    jobs: Optional[int] = 1,
) -> CalibrationResult:
    """
    c̄2 := min J_mixed(ρ_{3/2}(I)) / |I|^θ

    最小值取遍 |I| = 2..max_length 上所有在 ρ_{3/2}(I) 中平衡、在 I 上非常数的构型
    （ρ_{3/2}(I) 之外为正）。

    Raises:
        SizeGuardError: ρ_{3/2}(I) 超过 20 个格点
    """
    best = CalibrationResult('c_bar_2', k.alpha, sp.delta, sp.M0, float('inf'))
    for length in range(2, max_length + 1):
        region = expand(IntegerInterval(0, length), Fraction(3, 2))
        if region.length > CALIBRATION_GUARD:
            raise SizeGuardError("c̄2 标定窗口", region.length, CALIBRATION_GUARD)
        worker = partial(_c_bar_2_chunk, length=length, sp=sp, alpha=k.alpha, theta=tp.theta)
        chunks = chunked(range(1 << region.length), 4096)
        for value, count, code in ordered_map(worker, chunks, jobs):
            best.examined += count
            if code is not None and value < best.value:
                best.value = value
                spins = _bits_to_spins(code, region.length)
                best.argmin = [region.start + int(i) for i in np.flatnonzero(spins < 0)]
                best.details = {'length': length}
    logger.info(f"c̄2 标定: {best.value:.6g}（{best.examined} 个构型）")
    return best


def _c2_chunk(codes: List[int], half_width: int, sp: ScaleParams, alpha: float, theta: float, cutoff: int):
    k = CouplingKernel(alpha, 1)
    others = [x for x in range(-half_width, half_width + 1) if x != 0]
    best, count, arg = np.inf, 0, None
    for code in codes:
        minus = [0] + [x for i, x in enumerate(others) if (code >> i) & 1]
        sigma = SpinConfiguration.from_minus_sites(minus, -half_width, half_width + 1)
        result = peierls_map(sigma, sp)
        count += 1
        ratio = k.complement_interaction(sorted(result.A_sigma), cutoff) / float(result.I_sigma.length) ** theta
        if ratio < best:
            best, arg = ratio, minus
    return best, count, arg


def calibrate_c2(
    half_width: int,
    sp: ScaleParams,
    k: CouplingKernel,
    tp: ThetaParams,
    cutoff: int,
    jobs: Optional[int] = 1,
) -> CalibrationResult:
    """
    c2 := min J(A_σ, A_σ^c) / |I_σ|^θ

    最小值取遍 Λ = [-L, L] 上所有 σ_0 = -1 的构型。

    Raises:
        SizeGuardError: |Λ| 超过 20
    """
    size = 2 * half_width + 1
    if size > CALIBRATION_GUARD:
        raise SizeGuardError("c2 标定体积", size, CALIBRATION_GUARD)
    worker = partial(_c2_chunk, half_width=half_width, sp=sp, alpha=k.alpha, theta=tp.theta, cutoff=cutoff)
    best = CalibrationResult('c2', k.alpha, sp.delta, sp.M0, float('inf'), details={'half_width': half_width, 'cutoff': cutoff})
    for value, count, minus in ordered_map(worker, chunked(range(1 << (size - 1)), 1024), jobs):
        best.examined += count
        if minus is not None and value < best.value:
            best.value, best.argmin = value, minus
    logger.info(f"c2 标定: {best.value:.6g}（{best.examined} 个构型）")
    return best
