"""
局部哈密顿量
H = -sum_{x,y in Λ} J σσ - sum_{x in Λ, y notin Λ, |x-y|<=R} J σ_x η_y - ε sum h σ
"""

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache
from typing import Iterable, Optional, Tuple

import numpy as np

from .configuration import SpinConfiguration
from .coupling import CouplingKernel, Site, as_coords
from .errors import DimensionMismatchError, WindowTooSmallError

logger = logging.getLogger(__name__)

DEFAULT_CUTOFF = {1: 10_000, 2: 256}


class PairConvention(Enum):
    """Λ×Λ 求和的计数方式"""
    ORDERED = "ordered"      # 有序对，每个无序对贡献 2J
    UNORDERED = "unordered"  # 无序对，每对贡献一次

    @property
    def weight(self) -> float:
        return 2.0 if self is PairConvention.ORDERED else 1.0


@dataclass(frozen=True, eq=False)
class HamiltonianParams:
    """
    哈密顿量参数

    field 是与构型窗口同形状的外场数组，缺省视为 h ≡ 0。
    """
    beta: float = 1.0
    epsilon: float = 0.0
    field: Optional[np.ndarray] = None
    cutoff: int = DEFAULT_CUTOFF[1]
    pair_convention: PairConvention = PairConvention.ORDERED

    def __post_init__(self):
        if not self.beta >= 0:
            raise ValueError(f"beta 必须非负: {self.beta}")
        if not self.epsilon >= 0:
            raise ValueError(f"epsilon 必须非负: {self.epsilon}")
        if int(self.cutoff) < 1:
            raise ValueError(f"截断半径必须为正整数: {self.cutoff}")
        if isinstance(self.pair_convention, str):
            object.__setattr__(self, 'pair_convention', PairConvention(self.pair_convention))

    @classmethod
    def for_dimension(cls, dimension: int, **kwargs) -> 'HamiltonianParams':
        """按维度取默认截断半径"""
        kwargs.setdefault('cutoff', DEFAULT_CUTOFF[dimension])
        return cls(**kwargs)

    def with_field(self, field: Optional[np.ndarray], epsilon: Optional[float] = None) -> 'HamiltonianParams':
        eps = self.epsilon if epsilon is None else epsilon
        return replace(self, field=field, epsilon=eps)

    def without_field(self) -> 'HamiltonianParams':
        return replace(self, field=None, epsilon=0.0)

    def field_for(self, sigma: SpinConfiguration) -> np.ndarray:
        """与窗口对齐的外场（扁平数组）"""
        if self.field is None or self.epsilon == 0:
            return np.zeros(sigma.size, dtype=np.float64)
        field = np.asarray(self.field, dtype=np.float64)
        if field.shape != sigma.shape:
            raise DimensionMismatchError(f"外场形状 {field.shape} 与构型窗口 {sigma.shape} 不符")
        return field.reshape(-1)


@lru_cache(maxsize=8)
def _window_coupling(shape: Tuple[int, ...], alpha: float, cutoff: int) -> np.ndarray:
    # 只依赖相对位置，按原点为0的窗口计算
    kernel = CouplingKernel(alpha, len(shape))
    coords = np.indices(shape).reshape(len(shape), -1).T
    matrix = kernel.pair_matrix(coords, coords, cutoff=cutoff)
    matrix.flags.writeable = False
    return matrix


def window_coupling(sigma: SpinConfiguration, kernel: CouplingKernel, cutoff: int) -> np.ndarray:
    """窗口内全部格点之间的耦合矩阵（只读，缓存）"""
    if kernel.dimension != sigma.dimension:
        raise DimensionMismatchError(f"核维度 {kernel.dimension} 与构型维度 {sigma.dimension} 不符")
    return _window_coupling(tuple(sigma.shape), float(kernel.alpha), int(cutoff))


def _require_cutoff_window(sigma: SpinConfiguration, cutoff: int):
    # 边界值未知时，Λ 的 R 邻域必须落在窗口内
    if sigma.outside_value is not None:
        return
    vol = sigma.volume_coords()
    if len(vol) == 0:
        return
    for axis, (lo, hi) in enumerate(sigma.bounds()):
        if vol[:, axis].min() - cutoff < lo or vol[:, axis].max() + cutoff >= hi:
            raise WindowTooSmallError(f"窗口不足以容纳截断半径 {cutoff}")


def boundary_field(sigma: SpinConfiguration, kernel: CouplingKernel, cutoff: int) -> np.ndarray:
    """
    每个窗口格点受到的 Λ 外部自旋的耦合场 b_x

    b_x = sum_{y notin Λ, |x-y|<=R} J_xy s_y，其中窗口内 Λ 外的 s_y 取构型值，
    窗口外取边界值。

    Returns:
        np.ndarray: 扁平数组，长度为窗口格点数
    """
    _require_cutoff_window(sigma, cutoff)
    J = window_coupling(sigma, kernel, cutoff)
    spins = sigma.flat_spins().astype(np.float64)
    outside_mask = ~sigma.volume_mask.reshape(-1)
    field = J[:, outside_mask] @ spins[outside_mask] if outside_mask.any() else np.zeros(sigma.size)
    if sigma.outside_value is not None:
        beyond = kernel.self_sum(cutoff) - J.sum(axis=1)
        field = field + sigma.outside_value * beyond
    return field


def hamiltonian(sigma: SpinConfiguration, p: HamiltonianParams, k: CouplingKernel) -> float:
    """
    H^η_Λ(σ)

    Args:
        sigma: 自旋构型（体积 Λ 由其掩码给出）
        p: 哈密顿量参数
        k: 耦合核

    Returns:
        float: 能量
    """
    J = window_coupling(sigma, k, p.cutoff)
    vol = sigma.volume_mask.reshape(-1)
    s = sigma.flat_spins().astype(np.float64)
    s_vol = s[vol]
    pair_weight = p.pair_convention.weight / 2.0
    interior = -pair_weight * float(s_vol @ J[np.ix_(vol, vol)] @ s_vol)
    boundary = -float(s_vol @ boundary_field(sigma, k, p.cutoff)[vol])
    field = -p.epsilon * float(s_vol @ p.field_for(sigma)[vol]) if p.epsilon else 0.0
    return interior + boundary + field


def flip_energy_difference(
    sigma: SpinConfiguration,
    A: Iterable[Site],
    p: HamiltonianParams,
    k: CouplingKernel,
) -> float:
    """
    H(σ) - H(τ_A σ)，按边界公式直接计算

    = -2 sum_{x in A} σ_x [ w sum_{y in Λ\\A} J_xy σ_y + b_x + ε h_x ]，
    其中 w 为配对计数权重（有序为2，无序为1）。
    """
    J = window_coupling(sigma, k, p.cutoff)
    coords = as_coords(list(A), sigma.dimension)
    if len(coords) == 0:
        return 0.0
    flat_index = np.ravel_multi_index(
        tuple((coords - np.asarray(sigma.origin)).T), sigma.shape
    )
    flat_index = np.unique(flat_index)
    in_A = np.zeros(sigma.size, dtype=bool)
    in_A[flat_index] = True
    vol = sigma.volume_mask.reshape(-1)
    rest = vol & ~in_A
    s = sigma.flat_spins().astype(np.float64)
    local = p.pair_convention.weight * (J[np.ix_(flat_index, np.flatnonzero(rest))] @ s[rest])
    local = local + boundary_field(sigma, k, p.cutoff)[flat_index]
    local = local + p.epsilon * p.field_for(sigma)[flat_index]
    return float(-2.0 * np.sum(s[flat_index] * local))


def truncation_tail_bound(k: CouplingKernel, cutoff: int, volume: int = 1) -> float:
    """|Λ| 个格点的截断误差上界"""
    return volume * k.tail_bound(cutoff)


def cutoff_sensitivity(
    sigma: SpinConfiguration,
    p: HamiltonianParams,
    k: CouplingKernel,
    factor: int = 2,
) -> Tuple[float, float]:
    """
    截断半径放大 factor 倍时能量的变化与解析界

    Returns:
        Tuple[float, float]: (|H(R) - H(factor R)|, |Λ| * tail(R))
    """
    wider = replace(p, cutoff=int(p.cutoff * factor))
    change = abs(hamiltonian(sigma, p, k) - hamiltonian(sigma, wider, k))
    volume = int(sigma.volume_mask.sum())
    bound = truncation_tail_bound(k, p.cutoff, volume)
    if not math.isfinite(bound):
        logger.warning(f"尾部界不是有限值: R={p.cutoff}")
    return change, bound
