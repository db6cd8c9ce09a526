"""
二维轮廓模块
错误点、V(A)、最细 (M, a)-划分、轮廓标签与擦除、小规模轮廓穷举
"""

from .geometry import Point, neighbors, incorrect_points, holes, hull, hull_size, box_sites
from .partition import (
    PartitionParams,
    UnionFind,
    BRUTE_FORCE_GUARD,
    finest_partition,
    partition_is_valid,
    brute_force_finest_partition,
    set_partitions,
    part_distance,
)
from .contour import (
    Contour,
    ErasingCost,
    decorate,
    extract_contours,
    external_contours,
    erased_sites,
    erase_contour,
    cost_erasing_check,
    cost_erasing_outcome,
    contour_outcomes,
    contour_rows,
)
from .enumeration import (
    CONTOUR_SIZE_GUARD,
    ContourCount,
    box_side,
    is_realizable,
    enumerate_contours_at_size,
)

__all__ = [
    'Point', 'neighbors', 'incorrect_points', 'holes', 'hull', 'hull_size', 'box_sites',
    'PartitionParams', 'UnionFind', 'BRUTE_FORCE_GUARD', 'finest_partition',
    'partition_is_valid', 'brute_force_finest_partition', 'set_partitions', 'part_distance',
    'Contour', 'ErasingCost', 'decorate', 'extract_contours', 'external_contours',
    'erased_sites', 'erase_contour', 'cost_erasing_check', 'cost_erasing_outcome',
    'contour_outcomes', 'contour_rows',
    'CONTOUR_SIZE_GUARD', 'ContourCount', 'box_side', 'is_realizable', 'enumerate_contours_at_size',
]
