"""
单元测试：一维熵估计模块
"""

import math
import os
import sys
import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.kernel import CouplingKernel, SizeGuardError
from src.intervals import IntegerInterval, ScaleParams, tile
from src.bounds import ThetaParams
from src.entropy import (
    coarse_chain_check,
    coarse_sets,
    count_images,
    entropy_outcomes,
    enumerate_balanced,
    family_count_rows,
    psi,
    q_grid,
    refinement_counts,
    sample_balanced,
    step_entropy_check,
    whole_level_check,
    zero_tile_bound_check,
)
from src.verification import CheckSeverity


def _oracle_is_balanced(A, host, sp):
    """直接按定义逐个检查 ℓ-区间的平衡判定"""
    A = set(A)

    def spin(x):
        return -1 if x in A else 1

    level = 0
    while (1 << level) <= host.length:
        n = 1 << level
        M = sp.M(level)
        extra = math.floor((max(M, 1.0) - 1.0) * n + 1e-9)
        step = 1 << (level - 4) if level >= 4 else 1
        width = n // 2
        K = math.floor(M + 1e-12)
        for a in range(host.start - n, host.stop + 1):
            if a % step:
                continue
            if a - extra < host.start or a + n + extra > host.stop:
                continue
            inside = [spin(x) for x in range(a, a + n)]
            for sign in (1, -1):
                if -sign not in inside:
                    continue
                ring = list(range(a - width, a)) + list(range(a + n, a + n + width))
                if any(spin(x) != sign for x in ring):
                    continue
                dense = True
                for kk in range(1, K + 1):
                    for lo in (a + kk * n, a - kk * n):
                        count = sum(1 for x in range(lo, lo + n) if spin(x) == sign)
                        if not count > n * (1.0 - 1.0 / M):
                            dense = False
                if dense:
                    return False
        level += 1
    return True


class TestPsi(unittest.TestCase):
    """测试 Ψ_ℓ 映射"""

    def test_full_tile(self):
        """测试完整的块取 -1"""
        A = tile(3, 1).sites()
        self.assertEqual(psi(A, 3).values, (-1,))
        self.assertEqual(psi(A, 3, IntegerInterval(0, 24)).values, (1, -1, 1))
        self.assertEqual(psi(A, 2, IntegerInterval(0, 24)).values, (1, 1, -1, -1, 1, 1))

    def test_empty_set(self):
        """测试空集全部取 +1"""
        self.assertEqual(psi([], 1, IntegerInterval(0, 8)).values, (1, 1, 1, 1))

    def test_partial_tile(self):
        """测试部分覆盖的块取0"""
        mapping = psi([0, 1, 2], 2, IntegerInterval(0, 8))
        self.assertEqual(mapping.values, (0, 1))
        self.assertEqual(mapping.zero_tiles(), [IntegerInterval(0, 4)])

    def test_negative_level(self):
        """测试负层级报错"""
        with self.assertRaises(ValueError):
            psi([0], -1)

    @settings(max_examples=100, deadline=None)
    @given(st.sets(st.integers(min_value=-20, max_value=20), max_size=15))
    def test_level_zero_is_bijection(self, A):
        """测试 Ψ_0 可还原出 A"""
        mapping = psi(A, 0, IntegerInterval(-20, 21))
        self.assertEqual(mapping.minus_sites(), frozenset(A))


class TestCoarseSets(unittest.TestCase):
    """测试粗集合链"""

    def test_empty(self):
        """测试空集的链全为空"""
        self.assertTrue(all(not s for s in coarse_sets([], 6)))
        self.assertEqual(len(coarse_sets([], 6)), 5)

    def test_single_site(self):
        """测试单点的 A_ℓ 为包含它的块"""
        chain = coarse_sets([5], 6)
        for ell, A_ell in enumerate(chain):
            self.assertEqual(len(A_ell), 1 << ell)
            self.assertIn(5, A_ell)
            self.assertEqual(A_ell, tile(ell, 5 >> ell).sites())

    @settings(max_examples=100, deadline=None)
    @given(st.sets(st.integers(min_value=0, max_value=63), max_size=40))
    def test_chain_properties(self, A):
        """测试链单调且相邻差集受零块个数控制"""
        outcome = coarse_chain_check(A, 6)
        self.assertTrue(outcome.passed, outcome.message)


class TestBalancedFamily(unittest.TestCase):
    """测试平衡集合族"""

    def setUp(self):
        self.sp = ScaleParams(M0=1, delta=0.25)
        self.host = IntegerInterval(0, 8)
        self.family = enumerate_balanced(self.host, self.sp)

    def test_empty_set_is_member(self):
        """测试空集总是成员"""
        self.assertIn(frozenset(), self.family)

    def test_singleton_host(self):
        """测试单点宿主区间上两个集合都是成员"""
        family = enumerate_balanced(IntegerInterval(0, 1), ScaleParams(M0=4, delta=0.25))
        self.assertEqual(sorted(len(A) for A in family), [0, 1])

    def test_matches_definition_oracle(self):
        """测试成员与按定义逐个判定的结果一致"""
        expected = set()
        for code in range(1 << self.host.length):
            A = frozenset(i for i in range(self.host.length) if (code >> i) & 1)
            if _oracle_is_balanced(A, self.host, self.sp):
                expected.add(A)
        self.assertEqual(set(self.family.members), expected)

    def test_guard(self):
        """测试宿主区间规模上限"""
        with self.assertRaises(SizeGuardError):
            enumerate_balanced(IntegerInterval(0, 21), self.sp)

    def test_sampled_members_are_balanced(self):
        """测试抽样得到的成员都在完整族中"""
        sampled = sample_balanced(self.host, self.sp, 300, np.random.default_rng(7))
        self.assertTrue(sampled.sampled)
        self.assertTrue(set(sampled.members) <= set(self.family.members))
        self.assertEqual(len(set(sampled.members)), len(sampled))

    def test_q_band(self):
        """测试 Q 区间过滤"""
        k = CouplingKernel(1.3)
        band = self.family.with_q_band(2.0, k, 64)
        for A in band:
            self.assertTrue(2.0 <= k.complement_interaction(sorted(A), 64) < 4.0)
        self.assertEqual(band.q_band, (2.0, 4.0))
        grid = q_grid(0.5, 0.5, 4, 3)
        self.assertEqual(grid, [2.0, 4.0, 8.0])


class TestCounting(unittest.TestCase):
    """测试像计数与熵检查"""

    def setUp(self):
        self.family = enumerate_balanced(IntegerInterval(0, 8), ScaleParams(M0=1, delta=0.25))

    def test_level_zero_count(self):
        """测试0层像数等于族大小"""
        self.assertEqual(count_images(self.family, 0), len(self.family))

    def test_counts_decrease_with_level(self):
        """测试像数随层级不增"""
        counts = [count_images(self.family, ell) for ell in range(4)]
        self.assertEqual(counts, sorted(counts, reverse=True))
        self.assertTrue(whole_level_check(self.family, 3).passed)

    def test_step_refinement(self):
        """测试每层细化个数不超过 3^(2|𝒮|)"""
        for ell in range(3):
            self.assertTrue(step_entropy_check(self.family, ell).passed)
            for row in refinement_counts(self.family, ell):
                self.assertGreaterEqual(row['refinements'], 1)

    def test_zero_tile_bound_values(self):
        """测试零块下界的两侧"""
        k = CouplingKernel(1.3)
        tp = ThetaParams(1.3, 0.25)
        result = zero_tile_bound_check([0], 0, k, tp, 1.0, 64)
        self.assertEqual(result.value, 1.0)
        self.assertAlmostEqual(result.bound, 2.0 * k.self_sum(64) / 2.0 ** tp.theta)
        self.assertTrue(result.passed)
        self.assertTrue(zero_tile_bound_check([], 0, k, tp, 1.0, 64).passed)

    def test_outcomes(self):
        """测试未给出 c̄2 时硬检查全部通过"""
        outcomes = entropy_outcomes(self.family, 3, CouplingKernel(1.3), ThetaParams(1.3, 0.25), None, 64)
        for outcome in outcomes:
            if outcome.severity == CheckSeverity.ERROR:
                self.assertTrue(outcome.passed, outcome.name)
        self.assertEqual(outcomes[-1].severity, CheckSeverity.INFO)

    def test_count_rows(self):
        """测试导出行"""
        band = self.family.with_q_band(1.0, CouplingKernel(1.3), 64)
        rows = family_count_rows(self.family, [0, 1, 2], [band])
        self.assertEqual(len(rows), 6)
        self.assertEqual(rows[0]['count'], len(self.family))
        self.assertEqual(rows[3]['q_low'], 1.0)


if __name__ == '__main__':
    unittest.main()
