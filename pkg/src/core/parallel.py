"""
并行映射与随机数流
"""

import logging
from multiprocessing import Pool, cpu_count
from typing import Callable, Iterable, List, Optional, Sequence, TypeVar

import numpy as np

logger = logging.getLogger(__name__)

T = TypeVar('T')
R = TypeVar('R')


def ordered_map(func: Callable[[T], R], items: Sequence[T], jobs: Optional[int] = 1) -> List[R]:
    """
    按输入顺序返回结果的映射

    jobs <= 1 时串行执行；否则使用进程池，结果顺序与 jobs 无关。

    Args:
        func: 可被 pickle 的顶层函数
        items: 输入序列
        jobs: 进程数，None 表示使用全部 CPU
    """
    items = list(items)
    workers = cpu_count() if jobs is None else int(jobs)
    workers = min(workers, len(items))
    if workers <= 1:
        return [func(item) for item in items]
    logger.debug(f"使用 {workers} 个进程处理 {len(items)} 个任务")
    with Pool(workers) as pool:
        return pool.map(func, items)


def make_rng(seed: Optional[int]) -> np.random.Generator:
    """PCG64 生成器"""
    return np.random.Generator(np.random.PCG64(seed))


def spawn_rngs(seed: Optional[int], n: int) -> List[np.random.Generator]:
    """由同一种子派生 n 个相互独立的子流"""
    children = np.random.SeedSequence(seed).spawn(n)
    return [np.random.Generator(np.random.PCG64(child)) for child in children]


def chunked(seq: Iterable[T], size: int) -> List[List[T]]:
    """按固定大小切块"""
    seq = list(seq)
    size = max(1, int(size))
    return [seq[i:i + size] for i in range(0, len(seq), size)]


def keyed_rng(*key: int) -> np.random.Generator:
    """由整数键确定的随机流，如 (根种子, 外场种子, 链编号)"""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(v) for v in key])))
