"""
单格点 Metropolis 链
缓存每个格点的局部场，接受翻转时 O(|Λ|) 更新
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from ..kernel.configuration import SpinConfiguration
from ..kernel.coupling import CouplingKernel, Site
from ..kernel.errors import DimensionMismatchError, StructuralError
from ..kernel.hamiltonian import HamiltonianParams, boundary_field, window_coupling
from ..disorder.field import DisorderField
from ..disorder.gibbs import ExactGibbs

logger = logging.getLogger(__name__)

# 缓存局部场与直接重算的允许偏差
CACHE_TOLERANCE = 1e-7


@dataclass(eq=False)
class ChainState:
    """
    链的当前状态

    局部场 L_x = w Σ_{y∈Λ} J_xy σ_y + b_x + ε h_x，
    翻转 x 的能量变化为 2 σ_x L_x。每 refresh_every 次扫描重算一次并核对。
    """
    spins: np.ndarray
    shape: Tuple[int, ...]
    origin: Tuple[int, ...]
    coupling: np.ndarray
    boundary: np.ndarray
    external: np.ndarray
    weight: float
    rng: np.random.Generator
    sweeps: int = 0
    accepted: int = 0
    refresh_every: int = 100
    local: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        self.spins = np.array(self.spins, dtype=np.float64).reshape(-1)
        if self.local is None:
            self.local = self.recompute_fields()

    @classmethod
    def start(
        cls,
        shape: Sequence[int],
        kernel: CouplingKernel,
        params: HamiltonianParams,
        rng: np.random.Generator,
        h: Optional[DisorderField] = None,
        origin: Optional[Sequence[int]] = None,
        initial: int = 1,
        boundary: int = 1,
    ) -> 'ChainState':
        """
        在窗口上建立链，初始构型为常数 initial

        Args:
            shape: 窗口形状，整个窗口即 Λ
            kernel: 耦合核
            params: 哈密顿量参数（其中的外场被忽略）
            rng: 链独占的随机流
            h: 外场，强度取 h.epsilon
            origin: 窗口最小角点
            initial: 初始自旋
            boundary: 边界值
        """
        shape = tuple(int(v) for v in shape)
        origin = tuple(int(v) for v in origin) if origin is not None else (0,) * len(shape)
        template = SpinConfiguration.constant(shape, initial, origin, boundary)
        J = np.array(window_coupling(template, kernel, params.cutoff))
        b = boundary_field(template, kernel, params.cutoff)
        external = np.zeros(template.size)
        if h is not None and h.epsilon:
            if h.shape != shape or h.origin != origin:
                raise DimensionMismatchError(f"外场窗口 {h.shape}@{h.origin} 与链窗口 {shape}@{origin} 不符")
            external = h.scaled().reshape(-1)
        return cls(template.flat_spins(), shape, origin, J, b, external,
                   params.pair_convention.weight, rng)

    @classmethod
    def from_gibbs(cls, g: ExactGibbs, rng: np.random.Generator, h: Optional[DisorderField] = None, initial: int = 1) -> 'ChainState':
        """与精确吉布斯测度使用同一哈密顿量的链"""
        return cls.start(g.shape, g.kernel, g.params, rng, h, g.origin, initial, g.boundary)

    @property
    def n(self) -> int:
        return int(self.spins.size)

    def recompute_fields(self) -> np.ndarray:
        return self.weight * (self.coupling @ self.spins) + self.boundary + self.external

    def refresh(self) -> float:
        """
        重算局部场并与缓存核对

        Raises:
            StructuralError: 偏差超过 1e-7
        """
        fresh = self.recompute_fields()
        drift = float(np.max(np.abs(fresh - self.local))) if self.n else 0.0
        if drift > CACHE_TOLERANCE:
            raise StructuralError(f"局部场缓存偏差 {drift:.3g} 超过 {CACHE_TOLERANCE}")
        self.local = fresh
        return drift

    def energy(self) -> float:
        s = self.spins
        return float(-0.5 * self.weight * s @ self.coupling @ s - s @ (self.boundary + self.external))

    def configuration(self) -> SpinConfiguration:
        return SpinConfiguration(self.spins.astype(np.int8).reshape(self.shape), self.origin)

    def flat_index(self, site: Site) -> int:
        coords = (int(site),) if len(self.shape) == 1 else tuple(site)
        return int(np.ravel_multi_index(
            tuple(int(c) - o for c, o in zip(coords, self.origin)), self.shape
        ))

    def code(self) -> int:
        """构型编号，与 ExactGibbs 的编号一致"""
        minus = (self.spins < 0).astype(np.int64)
        return int(np.sum(minus << np.arange(self.n, dtype=np.int64)))

    def flip(self, x: int):
        old = self.spins[x]
        self.spins[x] = -old
        self.local -= 2.0 * old * self.weight * self.coupling[:, x]


def metropolis_sweep(state: ChainState, beta: float) -> ChainState:
    """
    一次扫描：按随机排列依次对每个格点提议翻转

    ΔH <= 0 时直接接受，否则以 exp(-β ΔH) 接受；β 可以是 math.inf。
    """
    order = state.rng.permutation(state.n)
    uniforms = state.rng.random(state.n)
    for x, u in zip(order, uniforms):
        delta = 2.0 * state.spins[x] * state.local[x]
        if delta <= 0 or u < math.exp(-beta * delta):
            state.flip(x)
            state.accepted += 1
    state.sweeps += 1
    if state.refresh_every and state.sweeps % state.refresh_every == 0:
        state.refresh()
    return state
