"""
λ-好的 0/1 序列

序列 p_1..p_N 是 λ-好的，当且仅当对每个含有 1 的真子区间 I ⊊ [1, N]，
存在 x ∉ I 使 p_x = 1 且 d(x, I) <= λ|I| + 1。
"""

import logging
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from ..kernel.errors import SizeGuardError
from ..verification.outcome import BoundResult

logger = logging.getLogger(__name__)

SEQUENCE_GUARD = 20


@dataclass(frozen=True)
class GoodSequence:
    """0/1 序列与参数 λ"""
    bits: Tuple[int, ...]
    lam: float

    def __post_init__(self):
        if len(self.bits) < 1:
            raise ValueError("序列长度至少为1")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"序列只能包含0和1: {self.bits}")
        if not self.lam > 0:
            raise ValueError(f"λ 必须为正: {self.lam}")

    @classmethod
    def of(cls, bits: Sequence[int], lam: float) -> 'GoodSequence':
        return cls(tuple(int(b) for b in bits), float(lam))

    @property
    def N(self) -> int:
        return len(self.bits)

    def ones(self) -> int:
        return sum(self.bits)


def _nearest_one_distances(bits: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    每个位置到其左侧（严格）与右侧（严格）最近的 1 的距离，没有时为 inf

    Args:
        bits: (K, N) 0/1 矩阵
    """
    K, N = bits.shape
    left = np.full((K, N), np.inf)
    right = np.full((K, N), np.inf)
    last = np.full(K, -np.inf)
    for i in range(N):
        left[:, i] = i - last
        last = np.where(bits[:, i] == 1, i, last)
    nxt = np.full(K, np.inf)
    for i in range(N - 1, -1, -1):
        right[:, i] = nxt - i
        nxt = np.where(bits[:, i] == 1, i, nxt)
    return left, right


def good_mask(bits: np.ndarray, lam: float) -> np.ndarray:
    """
    批量判定 λ-好

    Args:
        bits: (K, N) 0/1 矩阵，每行一个序列
        lam: λ

    Returns:
        np.ndarray: (K,) 布尔数组
    """
    bits = np.atleast_2d(np.asarray(bits, dtype=np.int8))
    K, N = bits.shape
    good = np.ones(K, dtype=bool)
    if N == 1:
        return good
    left, right = _nearest_one_distances(bits)
    prefix = np.concatenate([np.zeros((K, 1), dtype=np.int64), np.cumsum(bits, axis=1)], axis=1)
    for i in range(N):
        for j in range(i, N):
            if i == 0 and j == N - 1:
                continue
            inside = (prefix[:, j + 1] - prefix[:, i]) > 0
            nearest = np.minimum(left[:, i], right[:, j])
            ok = nearest <= lam * (j - i + 1) + 1
            good &= ~inside | ok
    return good


def is_lambda_good(seq: GoodSequence) -> bool:
    """判定单个序列是否 λ-好"""
    return bool(good_mask(np.asarray([seq.bits]), seq.lam)[0])


def sequence01_bound_check(N: int, lam: float) -> Tuple[int, float, bool]:
    """
    穷举 p_1 = p_N = 1 的全部 λ-好序列，比较最少的 1 的个数与 N^(log_{λ+2} 2)

    Returns:
        Tuple[int, float, bool]: (最少的1的个数, 下界, 是否成立)

    Raises:
        SizeGuardError: N 超过 20
    """
    if N < 1:
        raise ValueError(f"N 必须为正: {N}")
    if N > SEQUENCE_GUARD:
        raise SizeGuardError("sequence01", N, SEQUENCE_GUARD)
    bound = N ** (math.log(2.0) / math.log(lam + 2.0))
    if N == 1:
        return 1, bound, 1 >= bound
    inner = N - 2
    codes = np.arange(1 << inner, dtype=np.int64)
    middle = ((codes[:, None] >> np.arange(inner)) & 1).astype(np.int8)
    ends = np.ones((codes.size, 1), dtype=np.int8)
    bits = np.concatenate([ends, middle, ends], axis=1)
    mask = good_mask(bits, lam)
    min_ones = int(bits[mask].sum(axis=1).min())
    logger.debug(f"N={N}, λ={lam}: {int(mask.sum())} 个好序列，最少 {min_ones} 个1")
    return min_ones, bound, min_ones >= bound - 1e-12


def sequence01_result(N: int, lam: float) -> BoundResult:
    """以 BoundResult 形式返回 sequence01_bound_check"""
    min_ones, bound, passed = sequence01_bound_check(N, lam)
    return BoundResult(float(min_ones), bound, passed)
