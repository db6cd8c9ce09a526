"""
单元测试：二维轮廓模块
"""

import math
import os
import sys
import unittest
from collections import deque

import numpy as np
from hypothesis import given, settings, strategies as st

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.kernel import (
    CouplingKernel,
    HamiltonianParams,
    PreconditionError,
    SizeGuardError,
    SpinConfiguration,
    StructuralError,
)
from src.contour import (
    PartitionParams,
    UnionFind,
    brute_force_finest_partition,
    box_sites,
    contour_outcomes,
    cost_erasing_check,
    enumerate_contours_at_size,
    erase_contour,
    extract_contours,
    finest_partition,
    holes,
    hull,
    incorrect_points,
    partition_is_valid,
    set_partitions,
)
from src.verification import CheckSeverity


def _oracle_hull(A):
    """从包围盒外沿做广度优先搜索，未被访问到的格点即为 V(A)"""
    A = set(A)
    if not A:
        return set()
    lo0 = min(x[0] for x in A) - 1
    lo1 = min(x[1] for x in A) - 1
    hi0 = max(x[0] for x in A) + 1
    hi1 = max(x[1] for x in A) + 1
    seen = {(lo0, lo1)}
    queue = deque([(lo0, lo1)])
    while queue:
        i, j = queue.popleft()
        for y in ((i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)):
            if lo0 <= y[0] <= hi0 and lo1 <= y[1] <= hi1 and y not in seen and y not in A:
                seen.add(y)
                queue.append(y)
    return {(i, j) for i in range(lo0, hi0 + 1) for j in range(lo1, hi1 + 1)} - seen


def _square_ring(lo, hi):
    """[lo, hi)^2 方框的边"""
    return {(i, j) for i in range(lo, hi) for j in range(lo, hi) if i in (lo, hi - 1) or j in (lo, hi - 1)}


class TestIncorrectPoints(unittest.TestCase):
    """测试错误点"""

    def test_constant_plus(self):
        """测试全正构型没有错误点"""
        self.assertEqual(incorrect_points(SpinConfiguration.constant((4, 4))), frozenset())

    def test_single_minus(self):
        """测试单个负自旋及其四个邻居"""
        sigma = SpinConfiguration.from_minus_sites([(0, 0)], (-2, -2), (3, 3))
        self.assertEqual(
            incorrect_points(sigma),
            frozenset({(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)}),
        )

    def test_minus_on_window_edge(self):
        """测试窗口边缘的负自旋会带出窗口外的错误点"""
        sigma = SpinConfiguration.from_minus_sites([(0, 0)], (0, 0), (1, 1))
        self.assertEqual(len(incorrect_points(sigma)), 5)
        self.assertIn((-1, 0), incorrect_points(sigma))

    def test_block(self):
        """测试 2×2 负块：块本身加上8个边邻居"""
        block = [(1, 1), (1, 2), (2, 1), (2, 2)]
        sigma = SpinConfiguration.from_minus_sites(block, (0, 0), (4, 4))
        points = incorrect_points(sigma)
        self.assertEqual(len(points), 12)
        self.assertTrue(set(block) <= points)
        self.assertNotIn((0, 0), points)

    def test_requires_plus_boundary(self):
        """测试非正边界报错"""
        sigma = SpinConfiguration.constant((3, 3), outside_value=-1)
        with self.assertRaises(PreconditionError):
            incorrect_points(sigma)
        with self.assertRaises(PreconditionError):
            incorrect_points(SpinConfiguration.constant(5))


class TestHull(unittest.TestCase):
    """测试 V(A)"""

    def test_empty_and_single(self):
        """测试空集与单点"""
        self.assertEqual(hull([]), frozenset())
        self.assertEqual(hull([(3, 4)]), frozenset({(3, 4)}))

    def test_ring(self):
        """测试方环包含它围住的洞"""
        ring = _square_ring(0, 5)
        self.assertEqual(len(ring), 16)
        self.assertEqual(hull(ring), box_sites((0, 0), (5, 5)))
        self.assertEqual(holes(ring), [box_sites((1, 1), (4, 4))])

    def test_diagonal_gap_is_not_closed(self):
        """测试只有对角相接的环不封闭（四连通补集）"""
        diamond = {(0, 1), (1, 0), (1, 2), (2, 1)}
        self.assertEqual(hull(diamond), frozenset(diamond | {(1, 1)}))
        broken = {(0, 1), (1, 0), (1, 2)}
        self.assertEqual(hull(broken), frozenset(broken))

    @settings(max_examples=60, deadline=None)
    @given(st.sets(st.tuples(st.integers(0, 7), st.integers(0, 7)), max_size=30))
    def test_matches_flood_fill(self, A):
        """测试与外部广度优先搜索一致"""
        self.assertEqual(set(hull(A)), _oracle_hull(A))


class TestPartition(unittest.TestCase):
    """测试 (M, a)-划分"""

    def test_params(self):
        """测试 a = 6/(α-2)"""
        self.assertEqual(PartitionParams.for_alpha(3.0, 2.0), PartitionParams(2.0, 6.0))
        self.assertAlmostEqual(PartitionParams.for_alpha(2.5).a, 12.0)
        with self.assertRaises(ValueError):
            PartitionParams.for_alpha(2.0)
        with self.assertRaises(ValueError):
            PartitionParams(0.0, 1.0)

    def test_union_find(self):
        """测试并查集"""
        uf = UnionFind(5)
        self.assertTrue(uf.union(0, 1))
        self.assertTrue(uf.union(3, 4))
        self.assertFalse(uf.union(1, 0))
        self.assertEqual(sorted(sorted(g) for g in uf.groups().values()), [[0, 1], [2], [3, 4]])

    def test_forced_merge(self):
        """测试距离5、M=10时两点合并"""
        pp = PartitionParams.for_alpha(3.0, 10.0)
        self.assertEqual(finest_partition({(0, 0), (0, 5)}, pp), [frozenset({(0, 0), (0, 5)})])

    def test_far_points_stay_apart(self):
        """测试距离20、M=10时为两个单点"""
        pp = PartitionParams.for_alpha(3.0, 10.0)
        self.assertEqual(finest_partition({(0, 0), (0, 20)}, pp), [frozenset({(0, 0)}), frozenset({(0, 20)})])

    def test_growing_part_absorbs_neighbor(self):
        """测试合并后 |V| 变大会继续吸收更远的部分"""
        pp = PartitionParams(1.0, 2.0)
        # 两个多米诺各自 |V| = 2，相距2时 d <= 1*2
        self.assertEqual(len(finest_partition({(0, 0), (0, 1), (0, 3), (0, 4)}, pp)), 1)
        self.assertEqual(len(finest_partition({(0, 0), (0, 1), (0, 4), (0, 5)}, pp)), 2)
        self.assertEqual(len(finest_partition({(0, 0), (0, 2)}, pp)), 2)

    def test_empty(self):
        self.assertEqual(finest_partition([], PartitionParams(1.0, 1.0)), [])

    def test_set_partitions_count(self):
        """测试集合划分个数为 Bell 数"""
        self.assertEqual(sum(1 for _ in set_partitions([1, 2, 3, 4])), 15)
        self.assertEqual(sum(1 for _ in set_partitions(list(range(6)))), 203)

    def test_brute_force_guard(self):
        """测试暴力划分规模上限"""
        points = {(0, 3 * i) for i in range(10)}
        with self.assertRaises(SizeGuardError):
            brute_force_finest_partition(points, PartitionParams(1.0, 1.0))

    @settings(max_examples=25, deadline=None)
    @given(
        st.sets(st.tuples(st.integers(0, 15), st.integers(0, 15)), min_size=1, max_size=7),
        st.sampled_from([2.0, 10.0]),
    )
    def test_matches_brute_force(self, A, M):
        """测试合并不动点等于全部合法划分的交"""
        pp = PartitionParams.for_alpha(3.0, M)
        parts = finest_partition(A, pp)
        self.assertTrue(partition_is_valid(A, parts, pp))
        self.assertEqual(parts, brute_force_finest_partition(A, pp))

    def test_order_invariance(self):
        """测试随机合并顺序得到同一划分"""
        rng = np.random.default_rng(11)
        pp = PartitionParams(1.0, 1.0)
        for _ in range(5):
            A = {tuple(int(v) for v in rng.integers(0, 30, size=2)) for _ in range(25)}
            reference = finest_partition(A, pp)
            self.assertTrue(partition_is_valid(A, reference, pp))
            for seed in range(20):
                self.assertEqual(finest_partition(A, pp, np.random.default_rng(seed)), reference)

    def test_invalid_partition(self):
        """测试违反 (A) 或 (B) 的划分"""
        pp = PartitionParams(1.0, 1.0)
        A = {(0, 0), (0, 1)}
        self.assertFalse(partition_is_valid(A, [frozenset({(0, 0)}), frozenset({(0, 1)})], pp))
        self.assertFalse(partition_is_valid(A, [frozenset({(0, 0)})], pp))
        self.assertTrue(partition_is_valid(A, [frozenset(A)], pp))


class TestContours(unittest.TestCase):
    """测试轮廓提取与擦除"""

    def setUp(self):
        self.pp = PartitionParams.for_alpha(3.0, 1.0)
        self.k = CouplingKernel(3.0, 2)
        self.params = HamiltonianParams.for_dimension(2, cutoff=32)

    def test_constant_plus(self):
        """测试全正构型没有轮廓"""
        self.assertEqual(extract_contours(SpinConfiguration.constant((4, 4)), self.pp), [])

    def test_single_minus(self):
        """测试单个负自旋的轮廓与擦除"""
        sigma = SpinConfiguration.from_minus_sites([(2, 2)], (0, 0), (5, 5))
        contours = extract_contours(sigma, self.pp)
        self.assertEqual(len(contours), 1)
        gamma = contours[0]
        self.assertEqual(gamma.size, 5)
        self.assertEqual(gamma.interior, frozenset())
        self.assertTrue(gamma.external)
        self.assertEqual(gamma.outer_label, 1)
        self.assertEqual(erase_contour(sigma, gamma), SpinConfiguration.constant((5, 5)))
        cost = cost_erasing_check(sigma, gamma, self.k, self.params)
        self.assertGreater(cost.delta_H, 0)
        self.assertGreater(cost.ratio, 0)
        self.assertEqual(cost.int_minus_interaction, 0.0)

    def test_minus_disk(self):
        """测试半径3的负圆盘擦除后全正且能量下降"""
        disk = [(i, j) for i in range(11) for j in range(11) if (i - 5) ** 2 + (j - 5) ** 2 <= 9]
        sigma = SpinConfiguration.from_minus_sites(disk, (0, 0), (11, 11))
        contours = extract_contours(sigma, self.pp)
        self.assertEqual(len(contours), 1)
        gamma = contours[0]
        self.assertTrue(gamma.int_minus)
        self.assertEqual(gamma.int_plus, frozenset())
        self.assertEqual(erase_contour(sigma, gamma), SpinConfiguration.constant((11, 11)))
        cost = cost_erasing_check(sigma, gamma, self.k, self.params)
        self.assertGreater(cost.delta_H, 0)
        self.assertGreater(cost.int_minus_interaction, 0)

    def test_plus_interior(self):
        """测试负方环围住的正区域标为 +"""
        ring = _square_ring(1, 6)
        sigma = SpinConfiguration.from_minus_sites(ring, (0, 0), (7, 7))
        contours = extract_contours(sigma, self.pp)
        self.assertEqual(len(contours), 1)
        gamma = contours[0]
        self.assertEqual(gamma.int_plus, frozenset({(3, 3)}))
        self.assertEqual(gamma.int_minus, frozenset())
        self.assertEqual(erase_contour(sigma, gamma), SpinConfiguration.constant((7, 7)))

    def test_nested_contour(self):
        """测试负块中的正点形成非外部轮廓"""
        pp = PartitionParams(1.0, 0.5)
        block = [(i, j) for i in range(1, 14) for j in range(1, 14) if (i, j) != (7, 7)]
        sigma = SpinConfiguration.from_minus_sites(block, (0, 0), (15, 15))
        contours = extract_contours(sigma, pp)
        self.assertEqual(len(contours), 2)
        inner = [c for c in contours if not c.external]
        self.assertEqual(len(inner), 1)
        self.assertEqual(inner[0].support, frozenset({(7, 7), (6, 7), (8, 7), (7, 6), (7, 8)}))
        self.assertEqual(inner[0].outer_label, -1)
        with self.assertRaises(PreconditionError):
            erase_contour(sigma, inner[0])
        outer = [c for c in contours if c.external][0]
        erased = erase_contour(sigma, outer)
        # 外层轮廓擦除后，内部的孤立正点变为唯一的负自旋
        self.assertEqual(erased.minus_sites(), [(7, 7)])

    def test_three_contours(self):
        """测试负块、块中正点与远处负点组成三个轮廓"""
        spins = np.ones((420, 420), dtype=np.int8)
        spins[10:280, 10:280] = -1
        spins[145, 145] = 1
        spins[400, 400] = -1
        sigma = SpinConfiguration(spins)
        contours = extract_contours(sigma, self.pp)
        self.assertEqual(len(contours), 3)
        self.assertEqual(sum(c.external for c in contours), 2)
        nested = [c for c in contours if not c.external][0]
        self.assertIn((145, 145), nested.support)

    def test_label_must_be_constant(self):
        """测试过细的划分导致标签不恒定"""
        sigma = SpinConfiguration.from_minus_sites([(2, 2)], (0, 0), (5, 5))
        with self.assertRaises(StructuralError):
            extract_contours(sigma, PartitionParams(0.5, 6.0))

    def test_foreign_contour(self):
        """测试擦除不属于 Γ(σ) 的轮廓报错"""
        sigma = SpinConfiguration.from_minus_sites([(2, 2)], (0, 0), (5, 5))
        other = SpinConfiguration.from_minus_sites([(1, 1)], (0, 0), (5, 5))
        gamma = extract_contours(other, self.pp)[0]
        with self.assertRaises(StructuralError):
            erase_contour(sigma, gamma)

    def test_erase_all_external(self):
        """测试擦除全部外部轮廓后新的外部轮廓避开原来的 V(γ)"""
        block = [(i, j) for i in range(2, 9) for j in range(2, 9) if (i, j) != (5, 5)]
        sigma = SpinConfiguration.from_minus_sites(block + [(13, 13)], (0, 0), (16, 16))
        pp = PartitionParams(1.0, 0.5)
        before = [c for c in extract_contours(sigma, pp) if c.external]
        current = sigma
        for gamma in before:
            current = erase_contour(current, gamma)
        covered = frozenset().union(*(c.V for c in before))
        for gamma in extract_contours(current, pp):
            self.assertTrue(gamma.V <= covered)

    def test_random_outcomes(self):
        """测试随机构型上划分合法、τ_γ 逐点正确且擦除代价为正"""
        for seed in range(3):
            rng = np.random.default_rng(seed)
            spins = np.where(rng.random((16, 16)) < 0.3, -1, 1)
            sigma = SpinConfiguration(spins)
            _, outcomes = contour_outcomes(sigma, self.pp, self.k, self.params)
            for outcome in outcomes:
                if outcome.severity == CheckSeverity.ERROR:
                    self.assertTrue(outcome.passed, outcome.name)


class TestEnumeration(unittest.TestCase):
    """测试小规模轮廓穷举"""

    def setUp(self):
        self.pp = PartitionParams.for_alpha(3.0, 1.0)

    def test_small_sizes_are_empty(self):
        """测试 n <= 4 没有轮廓"""
        for n in (1, 2, 3, 4):
            self.assertEqual(enumerate_contours_at_size(n, self.pp).count, 0)

    def test_single_minus_shape(self):
        """测试 n = 5 只有单个负自旋的形状，平移个数为5"""
        result = enumerate_contours_at_size(5, self.pp)
        self.assertEqual(len(result.shapes), 1)
        self.assertEqual(result.count, 5)
        self.assertAlmostEqual(result.growth, math.log(5) / 5)

    def test_size_six_and_eight(self):
        """测试 n = 6 没有轮廓，n = 8 为两种多米诺与两种对角对"""
        self.assertEqual(enumerate_contours_at_size(6, self.pp).count, 0)
        result = enumerate_contours_at_size(8, self.pp)
        self.assertEqual(len(result.shapes), 4)
        self.assertEqual(result.count, 32)
        self.assertIsNone(enumerate_contours_at_size(6, self.pp).growth)

    def test_guard(self):
        """测试 n > 8 报错"""
        with self.assertRaises(SizeGuardError):
            enumerate_contours_at_size(9, self.pp)


if __name__ == '__main__':
    unittest.main()
