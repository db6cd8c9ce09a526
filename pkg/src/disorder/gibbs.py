"""
小窗口上的精确吉布斯测度
对 2^|Λ| 个构型全部枚举，给出配分函数与误差泛函 Δ_A
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import logsumexp

from ..kernel.configuration import SpinConfiguration
from ..kernel.coupling import CouplingKernel, Site
from ..kernel.errors import DimensionMismatchError, PreconditionError, SizeGuardError
from ..kernel.hamiltonian import HamiltonianParams, boundary_field, window_coupling
from .field import DisorderField, zero_field

logger = logging.getLogger(__name__)

EXACT_GUARD = 22

# 分块枚举时每块的构型数
_STATE_CHUNK = 1 << 16


def spins_of(codes: np.ndarray, n: int) -> np.ndarray:
    """
    构型编号转自旋矩阵

    第 i 位为1表示扁平下标 i 处为 -1，编号0即全正构型。
    """
    bits = (np.asarray(codes, dtype=np.int64)[:, None] >> np.arange(n, dtype=np.int64)) & 1
    return (1 - 2 * bits).astype(np.float64)


@dataclass(eq=False)
class ExactGibbs:
    """
    窗口 Λ 上带常数边界条件的有限体积吉布斯测度

    Λ 为整个窗口，边界值 boundary 作用在窗口外截断半径内的全部格点上。
    params 中的外场被忽略，外场由 DisorderField 另行给出。
    """
    shape: Tuple[int, ...]
    kernel: CouplingKernel
    params: HamiltonianParams
    origin: Tuple[int, ...] = ()
    boundary: int = 1
    _E0: Optional[np.ndarray] = field(default=None, init=False, repr=False)

    def __post_init__(self):
        self.shape = tuple(int(v) for v in self.shape)
        self.origin = tuple(int(v) for v in self.origin) or (0,) * len(self.shape)
        if len(self.shape) != self.kernel.dimension:
            raise DimensionMismatchError(f"窗口维度 {len(self.shape)} 与核维度 {self.kernel.dimension} 不符")
        if self.boundary not in (1, -1):
            raise ValueError(f"边界值必须为 ±1: {self.boundary}")
        if self.n > EXACT_GUARD:
            raise SizeGuardError("精确吉布斯窗口", self.n, EXACT_GUARD)
        template = self.template
        self._J = np.array(window_coupling(template, self.kernel, self.params.cutoff))
        self._b = boundary_field(template, self.kernel, self.params.cutoff)
        self._w = self.params.pair_convention.weight

    @classmethod
    def interval(cls, start: int, stop: int, kernel: CouplingKernel, params: HamiltonianParams, boundary: int = 1) -> 'ExactGibbs':
        """一维窗口 [start, stop)"""
        return cls((stop - start,), kernel, params, (start,), boundary)

    @property
    def n(self) -> int:
        return int(np.prod(self.shape)) if self.shape else 0

    @property
    def beta(self) -> float:
        return self.params.beta

    @property
    def template(self) -> SpinConfiguration:
        return SpinConfiguration.constant(self.shape, 1, self.origin, self.boundary)

    def with_params(self, **changes) -> 'ExactGibbs':
        return ExactGibbs(self.shape, self.kernel, replace(self.params, **changes), self.origin, self.boundary)

    def configuration(self, code: int) -> SpinConfiguration:
        """编号对应的构型"""
        spins = spins_of(np.array([code]), self.n)[0].astype(np.int8)
        return self.template.with_spins(spins.reshape(self.shape))

    def code_of(self, sigma: SpinConfiguration) -> int:
        minus = (sigma.flat_spins() == -1).astype(np.int64)
        return int(np.sum(minus << np.arange(self.n, dtype=np.int64)))

    def flat_index(self, A: Iterable[Site]) -> np.ndarray:
        return zero_field(self.shape, origin=self.origin).flat_index(A)

    def _field_vector(self, h: Optional[DisorderField]) -> np.ndarray:
        if h is None or h.epsilon == 0:
            return np.zeros(self.n)
        if h.shape != self.shape or h.origin != self.origin:
            raise DimensionMismatchError(f"外场窗口 {h.shape}@{h.origin} 与 Λ {self.shape}@{self.origin} 不符")
        return h.scaled().reshape(-1)

    def _chunks(self):
        total = 1 << self.n
        for start in range(0, total, _STATE_CHUNK):
            yield spins_of(np.arange(start, min(total, start + _STATE_CHUNK)), self.n)

    def base_energies(self) -> np.ndarray:
        """ε = 0 时全部构型的能量，按编号排列"""
        if self._E0 is None:
            parts = []
            for S in self._chunks():
                interior = -0.5 * self._w * np.einsum('ij,ij->i', S @ self._J, S)
                parts.append(interior - S @ self._b)
            self._E0 = np.concatenate(parts)
            self._E0.flags.writeable = False
        return self._E0

    def energies(self, h: Optional[DisorderField] = None) -> np.ndarray:
        """H(σ; h) 对全部构型"""
        E0 = self.base_energies()
        f = self._field_vector(h)
        if not f.any():
            return E0
        field_term = np.concatenate([S @ f for S in self._chunks()])
        return E0 - field_term

    def log_partition(self, h: Optional[DisorderField] = None) -> float:
        return float(logsumexp(-self.beta * self.energies(h)))

    def log_partition_batch(self, scaled_fields: np.ndarray) -> np.ndarray:
        """
        一批外场的 log Z

        Args:
            scaled_fields: (b, n) 数组，每行是扁平的 ε·h
        """
        E0 = self.base_energies()
        F = np.atleast_2d(scaled_fields)
        field_term = np.concatenate([F @ S.T for S in self._chunks()], axis=1)
        return logsumexp(-self.beta * (E0[None, :] - field_term), axis=1)

    def probabilities(self, h: Optional[DisorderField] = None) -> np.ndarray:
        """全部构型的吉布斯概率"""
        logits = -self.beta * self.energies(h)
        return np.exp(logits - logsumexp(logits))


def log_partition(g: ExactGibbs, h: Optional[DisorderField] = None) -> float:
    """
    log Z^η_{Λ;β,ε}(h)，通过完全枚举与 logsumexp 计算
    """
    return g.log_partition(h)


def delta_A(g: ExactGibbs, h: Optional[DisorderField], A: Iterable[Site]) -> float:
    """
    Δ_A(h) = -(1/β) log( Z(h) / Z(τ_A h) )

    Raises:
        PreconditionError: β = 0，或 A 不在 Λ 内
    """
    if g.beta <= 0:
        raise PreconditionError("β = 0 时 Δ_A 没有定义")
    sites = list(A)
    g.flat_index(sites)
    if not sites or h is None or h.epsilon == 0:
        return 0.0
    return -(g.log_partition(h) - g.log_partition(h.flipped(sites))) / g.beta
