"""
高斯随机外场
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..kernel.coupling import Site, as_coords
from ..kernel.errors import DimensionMismatchError, PreconditionError
from ..core.parallel import make_rng

logger = logging.getLogger(__name__)

Shape = Tuple[int, ...]


def _as_shape(window: Union[int, Sequence[int]]) -> Shape:
    if isinstance(window, (int, np.integer)):
        return (int(window),)
    return tuple(int(v) for v in window)


@dataclass(frozen=True, eq=False)
class DisorderField:
    """
    冻结的随机外场 h

    values 与窗口同形状，origin 为窗口最小角点。epsilon 是外场强度 ε，
    本身不乘进 values。
    """
    values: np.ndarray
    seed: Optional[int]
    epsilon: float = 1.0
    origin: Shape = ()

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        values.flags.writeable = False
        object.__setattr__(self, 'values', values)
        origin = self.origin or (0,) * values.ndim
        if len(origin) != values.ndim:
            raise DimensionMismatchError(f"原点 {origin} 与外场维度 {values.ndim} 不符")
        object.__setattr__(self, 'origin', tuple(int(v) for v in origin))
        if not self.epsilon >= 0:
            raise ValueError(f"epsilon 必须非负: {self.epsilon}")

    @property
    def shape(self) -> Shape:
        return self.values.shape

    @property
    def dimension(self) -> int:
        return self.values.ndim

    def flat_index(self, A: Iterable[Site]) -> np.ndarray:
        """A 中格点在扁平数组中的下标（去重、升序）"""
        coords = as_coords(A if isinstance(A, np.ndarray) else list(A), self.dimension)
        if len(coords) == 0:
            return np.zeros(0, dtype=np.int64)
        idx = coords - np.asarray(self.origin, dtype=np.int64)
        if np.any(idx < 0) or np.any(idx >= np.asarray(self.shape)):
            raise PreconditionError("格点集合超出外场窗口")
        return np.unique(np.ravel_multi_index(tuple(idx.T), self.shape))

    def flipped(self, A: Iterable[Site]) -> 'DisorderField':
        """τ_A(h)：A 上的外场取反"""
        flat = self.values.reshape(-1).copy()
        flat[self.flat_index(A)] *= -1.0
        return DisorderField(flat.reshape(self.shape), self.seed, self.epsilon, self.origin)

    def with_epsilon(self, epsilon: float) -> 'DisorderField':
        return DisorderField(self.values, self.seed, epsilon, self.origin)

    def scaled(self) -> np.ndarray:
        """ε·h"""
        return self.epsilon * self.values

    def rows(self) -> List[Dict[str, Any]]:
        """逐格点的快照行"""
        coords = np.indices(self.shape).reshape(self.dimension, -1).T + np.asarray(self.origin)
        rows = []
        for coord, h in zip(coords, self.values.reshape(-1)):
            row = {'seed': self.seed, 'epsilon': self.epsilon}
            if self.dimension == 1:
                row['x'] = int(coord[0])
            else:
                row['x'], row['y'] = int(coord[0]), int(coord[1])
            row['h'] = float(h)
            rows.append(row)
        return rows

    def to_dict(self) -> Dict[str, Any]:
        return {
            'seed': self.seed,
            'epsilon': self.epsilon,
            'shape': list(self.shape),
            'origin': list(self.origin),
            'mean': float(self.values.mean()) if self.values.size else 0.0,
            'std': float(self.values.std()) if self.values.size else 0.0,
        }


def sample_field(
    window: Union[int, Sequence[int]],
    seed: Optional[int],
    epsilon: float = 1.0,
    origin: Optional[Sequence[int]] = None,
) -> DisorderField:
    """
    在窗口上抽取 i.i.d. 标准高斯外场

    使用 PCG64 整数流与 numpy 的 ziggurat 正态算法，同一种子得到逐位相同的结果。

    Args:
        window: 窗口形状（一维可为整数）
        seed: 随机种子
        epsilon: 外场强度
        origin: 窗口最小角点，缺省为原点
    """
    shape = _as_shape(window)
    values = make_rng(seed).standard_normal(shape)
    return DisorderField(values, seed, epsilon, tuple(origin) if origin is not None else ())


def zero_field(window: Union[int, Sequence[int]], epsilon: float = 1.0, origin: Optional[Sequence[int]] = None) -> DisorderField:
    """h ≡ 0"""
    shape = _as_shape(window)
    return DisorderField(np.zeros(shape), None, epsilon, tuple(origin) if origin is not None else ())
