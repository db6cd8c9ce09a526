"""
自旋构型
有限窗口上的 ±1 自旋，窗口外取常数边界值
"""

from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .coupling import Site, as_coords, coords_to_sites, site_dimension
from .errors import DimensionMismatchError, PreconditionError, WindowTooSmallError


class SpinConfiguration:
    """
    自旋构型

    窗口是一个轴对齐的盒子，origin 为其最小角点。volume 是窗口内的有限体积 Λ
    （缺省为整个窗口）。outside_value 为窗口外的边界值，None 表示未知。
    """

    def __init__(
        self,
        spins: Union[np.ndarray, Sequence],
        origin: Optional[Union[int, Sequence[int]]] = None,
        outside_value: Optional[int] = 1,
        volume: Optional[np.ndarray] = None,
    ):
        arr = np.array(spins, dtype=np.int8)
        if arr.ndim not in (1, 2):
            raise ValueError(f"只支持一维或二维构型，得到 {arr.ndim} 维")
        if arr.size and not np.all(np.abs(arr) == 1):
            raise ValueError("自旋取值必须为 +1 或 -1")
        if outside_value not in (1, -1, None):
            raise ValueError(f"边界值必须为 +1、-1 或 None: {outside_value}")

        if origin is None:
            origin = (0,) * arr.ndim
        elif isinstance(origin, (int, np.integer)):
            origin = (int(origin),)
        origin = tuple(int(v) for v in origin)
        if len(origin) != arr.ndim:
            raise DimensionMismatchError(f"原点 {origin} 与构型维度 {arr.ndim} 不符")

        if volume is None:
            mask = np.ones(arr.shape, dtype=bool)
        else:
            mask = np.array(volume, dtype=bool)
            if mask.shape != arr.shape:
                raise ValueError(f"体积掩码形状 {mask.shape} 与构型 {arr.shape} 不符")

        arr.flags.writeable = False
        mask.flags.writeable = False
        self._spins = arr
        self._origin = origin
        self._outside = outside_value
        self._volume = mask
        self._prefix: Dict[int, np.ndarray] = {}

    # ---- 构造 ----

    @classmethod
    def constant(
        cls,
        shape: Union[int, Tuple[int, ...]],
        value: int = 1,
        origin: Optional[Union[int, Sequence[int]]] = None,
        outside_value: Optional[int] = 1,
    ) -> 'SpinConfiguration':
        """常数构型"""
        return cls(np.full(shape, value, dtype=np.int8), origin, outside_value)

    @classmethod
    def from_minus_sites(
        cls,
        minus_sites: Iterable[Site],
        lower: Union[int, Sequence[int]],
        upper: Union[int, Sequence[int]],
        outside_value: int = 1,
    ) -> 'SpinConfiguration':
        """
        在窗口 [lower, upper) 上构造只在给定格点为负的构型

        Args:
            minus_sites: 取 -1 的格点
            lower: 窗口下界（含）
            upper: 窗口上界（不含）
            outside_value: 窗口外边界值
        """
        lo = (lower,) if isinstance(lower, (int, np.integer)) else tuple(lower)
        hi = (upper,) if isinstance(upper, (int, np.integer)) else tuple(upper)
        shape = tuple(h - l for l, h in zip(lo, hi))
        config = cls.constant(shape, 1, lo, outside_value)
        return config.flip(minus_sites)

    # ---- 基本属性 ----

    @property
    def spins(self) -> np.ndarray:
        return self._spins

    @property
    def origin(self) -> Tuple[int, ...]:
        return self._origin

    @property
    def outside_value(self) -> Optional[int]:
        return self._outside

    @property
    def volume_mask(self) -> np.ndarray:
        return self._volume

    @property
    def dimension(self) -> int:
        return self._spins.ndim

    @property
    def shape(self) -> Tuple[int, ...]:
        return self._spins.shape

    @property
    def size(self) -> int:
        return int(self._spins.size)

    def bounds(self) -> List[Tuple[int, int]]:
        """每个坐标轴上的窗口范围 [lo, hi)"""
        return [(o, o + n) for o, n in zip(self._origin, self._spins.shape)]

    # ---- 格点访问 ----

    def _as_tuple(self, site: Site) -> Tuple[int, ...]:
        if site_dimension(site) != self.dimension:
            raise DimensionMismatchError(f"格点 {site} 与构型维度 {self.dimension} 不符")
        if self.dimension == 1:
            return (int(site),)
        return tuple(int(v) for v in site)

    def contains(self, site: Site) -> bool:
        """格点是否在窗口内"""
        coords = self._as_tuple(site)
        return all(lo <= c < hi for c, (lo, hi) in zip(coords, self.bounds()))

    def in_volume(self, site: Site) -> bool:
        """格点是否属于有限体积 Λ"""
        if not self.contains(site):
            return False
        return bool(self._volume[self.index_of(site)])

    def index_of(self, site: Site) -> Tuple[int, ...]:
        """格点对应的数组下标"""
        coords = self._as_tuple(site)
        return tuple(c - o for c, o in zip(coords, self._origin))

    def spin(self, site: Site) -> int:
        """
        读取格点自旋

        Raises:
            WindowTooSmallError: 格点在窗口外且边界值未知
        """
        if self.contains(site):
            return int(self._spins[self.index_of(site)])
        if self._outside is None:
            raise WindowTooSmallError(f"格点 {site} 在窗口之外且边界值未知")
        return self._outside

    def coords(self) -> np.ndarray:
        """窗口内全部格点的 (n, d) 坐标，按行优先顺序"""
        grids = np.indices(self.shape).reshape(self.dimension, -1).T
        return grids.astype(np.int64) + np.asarray(self._origin, dtype=np.int64)

    def sites(self) -> list:
        """窗口内全部格点"""
        return coords_to_sites(self.coords())

    def volume_coords(self) -> np.ndarray:
        """体积 Λ 内格点坐标"""
        return self.coords()[self._volume.reshape(-1)]

    def volume_sites(self) -> list:
        return coords_to_sites(self.volume_coords())

    def sites_with(self, value: int, within_volume: bool = False) -> list:
        """窗口内取给定自旋值的格点"""
        mask = (self._spins == value).reshape(-1)
        if within_volume:
            mask &= self._volume.reshape(-1)
        return coords_to_sites(self.coords()[mask])

    def minus_sites(self) -> list:
        return self.sites_with(-1)

    def flat_spins(self) -> np.ndarray:
        return self._spins.reshape(-1)

    # ---- 一维区间计数 ----

    def count_in_range(self, value: int, lo, hi):
        """
        一维情形下统计 [lo, hi) 内取值为 value 的格点数

        lo, hi 可以是整数或整数数组；窗口外部分按边界值计入。

        Raises:
            WindowTooSmallError: 区间伸出窗口且边界值未知
        """
        if self.dimension != 1:
            raise DimensionMismatchError("区间计数只适用于一维构型")
        prefix = self._prefix.get(value)
        if prefix is None:
            prefix = np.concatenate([[0], np.cumsum(self._spins == value)]).astype(np.int64)
            self._prefix[value] = prefix

        w0 = self._origin[0]
        w1 = w0 + self._spins.shape[0]
        lo_a = np.asarray(lo, dtype=np.int64)
        hi_a = np.maximum(np.asarray(hi, dtype=np.int64), lo_a)
        in_lo = np.clip(lo_a, w0, w1)
        in_hi = np.maximum(np.clip(hi_a, w0, w1), in_lo)
        inside = prefix[in_hi - w0] - prefix[in_lo - w0]
        outside_len = (hi_a - lo_a) - (in_hi - in_lo)
        if np.any(outside_len > 0):
            if self._outside is None:
                raise WindowTooSmallError(f"区间 [{lo}, {hi}) 超出窗口 [{w0}, {w1}) 且边界值未知")
            if self._outside == value:
                inside = inside + outside_len
        if np.ndim(inside) == 0:
            return int(inside)
        return inside

    # ---- 变换 ----

    def with_spins(self, spins: np.ndarray) -> 'SpinConfiguration':
        """保持窗口与边界，替换自旋数组"""
        return SpinConfiguration(spins, self._origin, self._outside, self._volume)

    def flip(self, A: Iterable[Site]) -> 'SpinConfiguration':
        """
        tau_A(sigma)：翻转 A 中的自旋

        Raises:
            PreconditionError: A 含有窗口外的格点
        """
        coords = as_coords(A if isinstance(A, np.ndarray) else list(A), self.dimension)
        new = self._spins.copy()
        if len(coords):
            idx = coords - np.asarray(self._origin, dtype=np.int64)
            shape = np.asarray(self.shape, dtype=np.int64)
            if np.any(idx < 0) or np.any(idx >= shape):
                raise PreconditionError("翻转集合超出构型窗口")
            # 重复格点只翻转一次
            idx = np.unique(idx, axis=0)
            new[tuple(idx.T)] *= -1
        return self.with_spins(new)

    def set_values(self, sites: Iterable[Site], value: int) -> 'SpinConfiguration':
        """把给定格点设为 value（窗口外格点忽略）"""
        new = self._spins.copy()
        for site in sites:
            if self.contains(site):
                new[self.index_of(site)] = value
        return self.with_spins(new)

    # ---- 比较与导出 ----

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpinConfiguration):
            return NotImplemented
        return (
            self._origin == other._origin
            and self._outside == other._outside
            and self._spins.shape == other._spins.shape
            and bool(np.array_equal(self._spins, other._spins))
            and bool(np.array_equal(self._volume, other._volume))
        )

    def __hash__(self):
        return hash((self._origin, self._outside, self._spins.tobytes()))

    def __repr__(self):
        return (
            f"SpinConfiguration(dimension={self.dimension}, origin={self._origin}, "
            f"shape={self.shape}, outside={self._outside})"
        )

    def to_dict(self) -> Dict:
        """转换为字典"""
        return {
            'origin': list(self._origin),
            'shape': list(self.shape),
            'outside_value': self._outside,
            'spins': self._spins.tolist(),
        }


def flip_set(sigma: SpinConfiguration, A: Iterable[Site]) -> SpinConfiguration:
    """tau_A(sigma)"""
    return sigma.flip(A)
