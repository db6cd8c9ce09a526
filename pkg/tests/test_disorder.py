"""
单元测试：随机外场与误差泛函模块
"""

import itertools
import math
import os
import sys
import unittest

import numpy as np
from hypothesis import given, settings, strategies as st
from scipy.special import logsumexp

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.kernel import (
    CouplingKernel,
    HamiltonianParams,
    PreconditionError,
    SizeGuardError,
    SpinConfiguration,
    hamiltonian,
)
from src.contour import PartitionParams, extract_contours
from src.intervals import IntegerInterval, ScaleParams
from src.entropy import enumerate_balanced
from src.coarse import CubeGrid
from src.disorder import (
    ExactGibbs,
    GoodEventConstants,
    antisymmetry_check,
    chain_1d,
    chain_2d,
    cutoff_doubling_check,
    delta_A,
    disorder_outcomes,
    event_frequency,
    flip_weight_check,
    good_event_eval,
    log_partition,
    sample_field,
    tail_bound,
    tail_check,
    telescoping_check,
    zero_field,
)


def _gibbs_1d(n, beta=1.0, epsilon=0.5, alpha=1.3, cutoff=50, **kwargs):
    params = HamiltonianParams(beta=beta, epsilon=epsilon, cutoff=cutoff, **kwargs)
    return ExactGibbs.interval(0, n, CouplingKernel(alpha, 1), params)


class TestDisorderField(unittest.TestCase):
    """测试高斯外场"""

    def test_deterministic(self):
        """测试同一种子得到相同外场"""
        first = sample_field(12, 7)
        second = sample_field(12, 7)
        np.testing.assert_array_equal(first.values, second.values)
        self.assertFalse(np.array_equal(first.values, sample_field(12, 8).values))

    def test_moments(self):
        """测试 10^6 个样本的均值与方差"""
        h = sample_field(1_000_000, 2024)
        self.assertLess(abs(h.values.mean()), 0.004)
        self.assertLess(abs(h.values.var() - 1.0), 0.006)

    def test_flip(self):
        """测试 τ_A(h) 只在 A 上取反"""
        h = sample_field((3, 4), 1, origin=(2, -1))
        flipped = h.flipped([(2, -1), (4, 2)])
        self.assertEqual(flipped.values[0, 0], -h.values[0, 0])
        self.assertEqual(flipped.values[2, 3], -h.values[2, 3])
        self.assertEqual(flipped.values[1, 1], h.values[1, 1])
        with self.assertRaises(PreconditionError):
            h.flipped([(0, 0)])

    def test_rows(self):
        """测试快照行带有种子"""
        rows = sample_field((2, 2), 5).rows()
        self.assertEqual(len(rows), 4)
        self.assertEqual(rows[0]['seed'], 5)
        self.assertEqual((rows[3]['x'], rows[3]['y']), (1, 1))

    def test_epsilon_linearity(self):
        """测试外场项对 ε 线性"""
        k = CouplingKernel(1.3, 1)
        sigma = SpinConfiguration([1, -1, -1, 1, -1])
        h = sample_field(5, 3)
        bare = hamiltonian(sigma, HamiltonianParams(cutoff=40), k)
        terms = [
            hamiltonian(sigma, HamiltonianParams(cutoff=40).with_field(h.values, eps), k) - bare
            for eps in (0.5, 1.0, 2.0)
        ]
        self.assertAlmostEqual(terms[1], 2 * terms[0])
        self.assertAlmostEqual(terms[2], 4 * terms[0])


class TestExactGibbs(unittest.TestCase):
    """测试精确配分函数"""

    def test_size_guard(self):
        """测试超过22个格点报错"""
        with self.assertRaises(SizeGuardError):
            _gibbs_1d(23)

    def test_codes(self):
        """测试编号与构型互逆"""
        g = _gibbs_1d(6)
        for code in (0, 1, 37, 63):
            self.assertEqual(g.code_of(g.configuration(code)), code)
        self.assertTrue(np.all(g.configuration(0).spins == 1))

    def test_infinite_temperature(self):
        """测试 β = 0 时 log Z = |Λ| ln 2"""
        g = _gibbs_1d(5, beta=0.0)
        self.assertAlmostEqual(log_partition(g, sample_field(5, 1)), 5 * math.log(2))

    def test_single_site(self):
        """测试单格点闭式 log(2cosh(βB))"""
        k = CouplingKernel(1.3, 1)
        g = ExactGibbs.interval(0, 1, k, HamiltonianParams(beta=0.7, cutoff=100))
        B = k.self_sum(100)
        self.assertAlmostEqual(log_partition(g), math.log(2 * math.cosh(0.7 * B)))

    def test_energies_match_hamiltonian(self):
        """测试枚举能量与哈密顿量函数一致"""
        cases = [
            (_gibbs_1d(6), sample_field(6, 4, 0.5)),
            (_gibbs_1d(6, pair_convention='unordered'), sample_field(6, 4, 0.5)),
            (ExactGibbs((2, 3), CouplingKernel(3.0, 2), HamiltonianParams(cutoff=16), (1, 1)),
             sample_field((2, 3), 9, 0.3, (1, 1))),
        ]
        for g, h in cases:
            energies = g.energies(h)
            params = g.params.with_field(h.values, h.epsilon)
            for code in (0, 5, 17, 42, (1 << g.n) - 1):
                expected = hamiltonian(g.configuration(code), params, g.kernel)
                self.assertAlmostEqual(energies[code], expected, places=9)

    def test_probabilities(self):
        """测试概率归一且全正构型最可能"""
        g = _gibbs_1d(6, beta=2.0)
        p = g.probabilities()
        self.assertAlmostEqual(p.sum(), 1.0)
        self.assertEqual(int(np.argmax(p)), 0)


class TestDeltaA(unittest.TestCase):
    """测试误差泛函"""

    def test_trivial(self):
        """测试 h ≡ 0 与 A = ∅ 时为0"""
        g = _gibbs_1d(6)
        self.assertEqual(delta_A(g, zero_field(6), [1, 2]), 0.0)
        self.assertEqual(delta_A(g, sample_field(6, 1, 0.5), []), 0.0)

    def test_preconditions(self):
        """测试 β = 0 与 A 越界"""
        h = sample_field(6, 1, 0.5)
        with self.assertRaises(PreconditionError):
            delta_A(_gibbs_1d(6, beta=0.0), h, [1])
        with self.assertRaises(PreconditionError):
            delta_A(_gibbs_1d(6), h, [6])

    def test_brute_force(self):
        """测试与直接逐构型求和一致"""
        g = _gibbs_1d(8, beta=0.8)
        h = sample_field(8, 11, 0.7)
        A = [2, 3, 4]
        k = g.kernel

        def log_z(field):
            params = g.params.with_field(field.values, field.epsilon)
            terms = []
            for spins in itertools.product((1, -1), repeat=8):
                sigma = SpinConfiguration(spins)
                terms.append(-g.beta * hamiltonian(sigma, params, k))
            return logsumexp(terms)

        expected = -(log_z(h) - log_z(h.flipped(A))) / g.beta
        self.assertAlmostEqual(delta_A(g, h, A), expected, places=9)

    def test_antisymmetry_twelve_sites(self):
        """测试 |Λ| = 12、A 为一半时的反对称性"""
        g = _gibbs_1d(12)
        h = sample_field(12, 5, 0.8)
        A = list(range(6))
        self.assertAlmostEqual(delta_A(g, h.flipped(A), A), -delta_A(g, h, A), places=9)
        self.assertTrue(antisymmetry_check(g, h, A).passed)

    @settings(max_examples=20, deadline=None)
    @given(st.sets(st.integers(0, 6), max_size=7), st.integers(0, 1000))
    def test_antisymmetry_property(self, A, seed):
        """测试任意 A 与外场的反对称性"""
        g = _gibbs_1d(7)
        h = sample_field(7, seed, 0.6)
        self.assertTrue(antisymmetry_check(g, h, sorted(A)).passed)

    def test_cutoff_doubling(self):
        """测试截断半径加倍时 Δ_A 的变化在尾部界内"""
        g = _gibbs_1d(6, alpha=1.3, cutoff=100)
        result = cutoff_doubling_check(g, sample_field(6, 3, 0.5), [2, 3])
        self.assertTrue(result.passed)


class TestTail(unittest.TestCase):
    """测试次高斯尾部检查"""

    def test_bound_values(self):
        """测试上界取值"""
        self.assertAlmostEqual(tail_bound(2.0, 0.5, 4), 2 * math.exp(-0.5))
        self.assertEqual(tail_bound(1.0, 0.5, 0), 0.0)

    def test_same_sets(self):
        """测试 A = A' 时差恒为0"""
        g = _gibbs_1d(8, epsilon=0.5)
        result = tail_check(g, [1, 2], [2, 1], 0.1, 1000)
        self.assertEqual(result.empirical, 0.0)
        self.assertTrue(result.passed)

    def test_vacuous_bound(self):
        """测试 |AΔA'| = 4、ε = 0.5、λ = 2 时上界大于1"""
        g = _gibbs_1d(8, epsilon=0.5)
        result = tail_check(g, [0, 1, 2, 3], [], 2.0, 2000)
        self.assertGreater(result.bound, 1.0)
        self.assertTrue(result.passed)

    def test_informative_cell(self):
        """测试 |Λ| = 12 上上界小于1的参数组合"""
        g = _gibbs_1d(12, epsilon=0.2)
        result = tail_check(g, [5], [6], 1.0, 5000, seed=3)
        self.assertLess(result.bound, 1.0)
        self.assertTrue(result.passed)
        self.assertEqual(result.sym_diff, 2)

    def test_worker_independence(self):
        """测试结果与进程数无关"""
        g = _gibbs_1d(8, epsilon=1.0)
        serial = tail_check(g, [0, 1], [5], 0.5, 6000, seed=1, jobs=1)
        parallel = tail_check(g, [0, 1], [5], 0.5, 6000, seed=1, jobs=2)
        self.assertEqual(serial.empirical, parallel.empirical)

    def test_guards(self):
        """测试规模与 λ 的限制"""
        with self.assertRaises(SizeGuardError):
            tail_check(_gibbs_1d(15), [0], [1], 1.0, 10)
        with self.assertRaises(ValueError):
            tail_check(_gibbs_1d(8), [0], [1], 0.0, 10)


class TestGoodEvent(unittest.TestCase):
    """测试好事件"""

    FAMILY = [frozenset({3, 4}), frozenset({2, 3, 4, 5}), frozenset({0})]

    def test_zero_field(self):
        """测试 h ≡ 0 时事件成立"""
        g = _gibbs_1d(8)
        result = good_event_eval(g, zero_field(8), self.FAMILY)
        self.assertTrue(result.holds)
        self.assertEqual(result.checked, 3)

    def test_frequency_trend(self):
        """测试 ε 增大时事件频率不升"""
        g = _gibbs_1d(8)
        rows = event_frequency(g, self.FAMILY, [0.0, 5.0], range(20))
        self.assertEqual(rows[0]['frequency'], 1.0)
        self.assertLess(rows[1]['frequency'], 1.0)
        self.assertEqual(rows[1]['seeds'], 20)

    def test_contour_family(self):
        """测试二维轮廓族需要 b1"""
        sigma = SpinConfiguration.from_minus_sites([(1, 1)], (0, 0), (3, 3))
        contours = extract_contours(sigma, PartitionParams.for_alpha(3.0))
        g = ExactGibbs((3, 3), CouplingKernel(3.0, 2), HamiltonianParams(cutoff=8))
        with self.assertRaises(PreconditionError):
            good_event_eval(g, zero_field((3, 3)), contours)
        result = good_event_eval(g, zero_field((3, 3)), contours, GoodEventConstants(b1=1.0))
        self.assertTrue(result.holds)

    def test_balanced_family(self):
        """测试平衡集合族与其成员列表给出相同的好事件判定"""
        g = _gibbs_1d(8, epsilon=2.0)
        h = sample_field(8, 3, 2.0)
        family = enumerate_balanced(IntegerInterval(2, 6), ScaleParams(M0=1, delta=0.25))
        by_family = good_event_eval(g, h, family)
        by_list = good_event_eval(g, h, list(family.members))
        self.assertEqual(by_family.checked, len(family))
        self.assertEqual(by_family.to_dict(), by_list.to_dict())

        Q = g.kernel.complement_interaction([3], 50)
        banded = family.with_q_band(Q, g.kernel, 50)
        self.assertEqual(good_event_eval(g, h, banded).checked, len(banded))
        self.assertTrue(good_event_eval(g, zero_field(8), family).holds)


class TestIdentities(unittest.TestCase):
    """测试伸缩和与翻转保测性"""

    def test_telescoping_1d(self):
        """测试一维粗集合链"""
        g = _gibbs_1d(8)
        chain = chain_1d({2, 3}, 4)
        self.assertEqual(chain[-1], frozenset())
        self.assertTrue(telescoping_check(g, sample_field(8, 2, 0.5), chain).passed)

    def test_telescoping_2d(self):
        """测试二维近似链"""
        g = ExactGibbs((3, 3), CouplingKernel(3.0, 2), HamiltonianParams(cutoff=8))
        chain = chain_2d({(1, 1)}, CubeGrid(5), g.kernel)
        self.assertEqual(chain, [frozenset({(1, 1)}), frozenset()])
        self.assertTrue(telescoping_check(g, sample_field((3, 3), 2, 0.5), chain).passed)

    def test_flip_weight(self):
        """测试一维与二维的逐项保测性"""
        cases = [
            (_gibbs_1d(6), sample_field(6, 8, 0.7), [1, 4]),
            (ExactGibbs((2, 3), CouplingKernel(2.5, 2), HamiltonianParams(cutoff=8)),
             sample_field((2, 3), 8, 0.7), [(0, 0), (1, 2)]),
        ]
        for g, h, A in cases:
            self.assertTrue(flip_weight_check(g, h, A).passed)
        with self.assertRaises(SizeGuardError):
            flip_weight_check(_gibbs_1d(11), sample_field(11, 1), [0])

    def test_outcomes(self):
        """测试全部恒等式检查通过"""
        g = _gibbs_1d(8, cutoff=100)
        outcomes = disorder_outcomes(g, sample_field(8, 6, 0.5), [3, 4], chain_1d({3, 4}, 3))
        self.assertEqual(len(outcomes), 4)
        self.assertTrue(all(o.passed for o in outcomes))


if __name__ == '__main__':
    unittest.main()
