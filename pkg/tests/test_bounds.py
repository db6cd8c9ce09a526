"""
单元测试：一维能量估计模块
"""

import itertools
import math
import os
import sys
import tempfile
import unittest
from fractions import Fraction

import numpy as np
from hypothesis import given, settings, strategies as st

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.kernel import (
    CouplingKernel,
    HamiltonianParams,
    PreconditionError,
    SizeGuardError,
    SpinConfiguration,
)
from src.intervals import IntegerInterval, ScaleParams, expand
from src.balance import peierls_map
from src.bounds import (
    ConstantsStore,
    GoodSequence,
    LOG_39_OF_2,
    ThetaParams,
    approximate_interval,
    approximation_slack,
    balanced_interaction_check,
    c_bar_1,
    c_bar_3,
    calibrate_c2,
    calibrate_c_bar_2,
    energy_bound_1_check,
    energy_bound_2_check,
    fake_interval_expansion_check,
    first_interaction_check,
    is_lambda_good,
    min_interaction_lower_bound_check,
    peierls_lemma_outcomes,
    sequence01_bound_check,
    set_interaction_lower_bound_check,
)
from src.verification import CheckOutcome, CheckSeverity


class TestInteractionBounds(unittest.TestCase):
    """测试相互作用下界"""

    def test_two_site_interval(self):
        """测试 I={0,1}, σ=(-,+), α=2 时 J=1 >= 0.25"""
        sigma = SpinConfiguration([-1, 1], origin=0)
        result = min_interaction_lower_bound_check(IntegerInterval(0, 2), sigma, CouplingKernel(2.0))
        self.assertAlmostEqual(result.value, 1.0)
        self.assertAlmostEqual(result.bound, 0.25)
        self.assertTrue(result.passed)

    def test_constant_interval_has_zero_bound(self):
        """测试 m=0 时下界为0"""
        sigma = SpinConfiguration.constant(5, 1, 0)
        result = min_interaction_lower_bound_check(IntegerInterval(0, 5), sigma, CouplingKernel(1.3))
        self.assertEqual(result.bound, 0.0)
        self.assertTrue(result.passed)

    def test_exhaustive_small_intervals(self):
        """测试 |I| <= 8 的全部构型"""
        for alpha in (1.1, 1.3, 1.49):
            k = CouplingKernel(alpha)
            for n in range(1, 9):
                for bits in itertools.product([1, -1], repeat=n):
                    sigma = SpinConfiguration(list(bits), origin=0)
                    self.assertTrue(min_interaction_lower_bound_check(IntegerInterval(0, n), sigma, k).passed)

    def test_set_bound(self):
        """测试 J(A, A^c) >= c̄1 |A|^(2-α)"""
        single = set_interaction_lower_bound_check([0], CouplingKernel(1.2), 10_000)
        self.assertTrue(single.passed)
        self.assertGreater(single.value, 2.0)
        self.assertAlmostEqual(single.bound, 2.0 ** -1.2)
        self.assertTrue(set_interaction_lower_bound_check(range(10), CouplingKernel(1.3), 10_000).passed)

    def test_empty_set_rejected(self):
        """测试空集报错"""
        with self.assertRaises(PreconditionError):
            set_interaction_lower_bound_check([], CouplingKernel(1.3), 100)

    def test_constants(self):
        """测试常数取值"""
        self.assertAlmostEqual(c_bar_1(2.0), 0.25)
        self.assertAlmostEqual(c_bar_3(1.5), 8.0)
        tp = ThetaParams(1.3, 0.001)
        self.assertAlmostEqual(tp.theta, LOG_39_OF_2)
        self.assertGreater(tp.theta, 0.5)
        self.assertAlmostEqual(ThetaParams(1.45, 0.01).theta, 0.45)


class TestApproximateInterval(unittest.TestCase):
    """测试二进近似区间"""

    def test_singleton(self):
        """测试单点区间"""
        approx = approximate_interval(IntegerInterval(0, 1))
        self.assertIn(0, approx)
        self.assertLessEqual(approximation_slack(IntegerInterval(0, 1), approx), 0.7)

    def test_exhaustive(self):
        """测试长度与位置的穷举"""
        for length in range(1, 81):
            for start in range(-20, 21):
                base = IntegerInterval(start, start + length)
                approx = approximate_interval(base)
                self.assertTrue(approx.interval().contains_interval(base), f"{base} -> {approx}")
                self.assertLessEqual(approximation_slack(base, approx), 0.7 + 1e-12)

    def test_empty_rejected(self):
        """测试空区间报错"""
        with self.assertRaises(ValueError):
            approximate_interval(IntegerInterval(3, 3))


class TestGoodSequence(unittest.TestCase):
    """测试 λ-好序列"""

    def test_examples(self):
        """测试典型例子"""
        self.assertFalse(is_lambda_good(GoodSequence.of([1, 0, 0, 1], 1.9)))
        self.assertTrue(is_lambda_good(GoodSequence.of([1, 1, 1, 1, 1], 0.5)))
        self.assertTrue(is_lambda_good(GoodSequence.of([1], 1.9)))

    def test_invalid_bits(self):
        """测试非法序列"""
        with self.assertRaises(ValueError):
            GoodSequence.of([1, 2], 1.0)

    def test_sequence01_small(self):
        """测试 N=4, λ=1.9 时最少有3个1"""
        min_ones, bound, passed = sequence01_bound_check(4, 1.9)
        self.assertEqual(min_ones, 3)
        self.assertAlmostEqual(bound, 4 ** (math.log(2) / math.log(3.9)))
        self.assertTrue(passed)
        self.assertEqual(sequence01_bound_check(1, 1.9)[0], 1)

    def test_sequence01_moderate(self):
        """测试 N <= 12 时下界成立"""
        for lam in (1.0, 1.9, 3.0):
            for N in range(1, 13):
                self.assertTrue(sequence01_bound_check(N, lam)[2], f"N={N}, λ={lam}")

    def test_sequence01_guard(self):
        """测试穷举上限"""
        with self.assertRaises(SizeGuardError):
            sequence01_bound_check(21, 1.9)

    @settings(max_examples=200, deadline=None)
    @given(
        st.lists(st.integers(min_value=0, max_value=1), min_size=1, max_size=10),
        st.floats(min_value=0.1, max_value=4.0),
        st.floats(min_value=0.0, max_value=3.0),
    )
    def test_monotone_in_lambda(self, bits, lam, extra):
        """测试 λ 增大时好序列保持为好序列"""
        if is_lambda_good(GoodSequence.of(bits, lam)):
            self.assertTrue(is_lambda_good(GoodSequence.of(bits, lam + extra)))


class TestEnergyBounds(unittest.TestCase):
    """测试 Peierls 能量估计"""

    def setUp(self):
        self.k = CouplingKernel(1.3)
        self.params = HamiltonianParams(cutoff=64)

    def test_single_site_volume(self):
        """测试 Λ={0} 时 ΔH = 2J({0},{0}^c)"""
        sigma = SpinConfiguration.from_minus_sites([0], 0, 1)
        pr = peierls_map(sigma, ScaleParams(M0=1, delta=0.25))
        result = energy_bound_2_check(sigma, pr, self.k, self.params)
        self.assertAlmostEqual(result.value, 2.0 * result.bound, places=9)
        self.assertAlmostEqual(result.bound, self.k.self_sum(64), places=9)
        self.assertTrue(result.passed)

        tp = ThetaParams(1.3, 0.25)
        self.assertTrue(energy_bound_1_check(pr, self.k, tp, 1.0, 64).passed)

    def test_empty_A_rejected(self):
        """测试 A_σ 为空时报错"""
        sigma = SpinConfiguration.constant(3, 1, -1)
        pr = peierls_map(sigma, ScaleParams(M0=1, delta=0.25))
        with self.assertRaises(PreconditionError):
            energy_bound_2_check(sigma, pr, self.k, self.params)
        with self.assertRaises(PreconditionError):
            energy_bound_1_check(pr, self.k, ThetaParams(1.3, 0.25), 1.0, 64)

    def test_exhaustive_large_regime(self):
        """测试大常数区间下 Λ=[-3,3] 的全部 σ_0=-1 构型"""
        sp = ScaleParams(M0=2 ** 10, delta=0.001)
        sites = [x for x in range(-3, 4) if x != 0]
        for bits in itertools.product([1, -1], repeat=len(sites)):
            minus = [0] + [x for x, b in zip(sites, bits) if b < 0]
            sigma = SpinConfiguration.from_minus_sites(minus, -3, 4)
            pr = peierls_map(sigma, sp)
            self.assertTrue(energy_bound_2_check(sigma, pr, self.k, self.params).passed, f"{minus}")


class TestPeierlsLemmaChecks(unittest.TestCase):
    """测试引理检查"""

    def setUp(self):
        self.k = CouplingKernel(1.3)
        self.sp = ScaleParams(M0=1, delta=0.25)

    def test_single_site(self):
        """测试 Λ={0}"""
        sigma = SpinConfiguration.from_minus_sites([0], 0, 1)
        pr = peierls_map(sigma, self.sp)
        first = first_interaction_check(pr, self.k, 64)
        self.assertTrue(first.passed)
        self.assertEqual(first.value, 0.0)
        fake = fake_interval_expansion_check(pr)
        self.assertEqual(fake.severity, CheckSeverity.INFO)

    def test_outcomes_shape(self):
        """测试每条轨迹产生四项结果"""
        sigma = SpinConfiguration.from_minus_sites([-2, 0, 1, 3], -4, 5)
        outcomes = peierls_lemma_outcomes(peierls_map(sigma, self.sp), self.k, 64)
        self.assertEqual(len(outcomes), 4)
        for outcome in outcomes:
            self.assertIsInstance(outcome, CheckOutcome)
            self.assertTrue(outcome.name.startswith('bounds.'))
            # 小常数区间下不出现硬断言
            self.assertNotEqual(outcome.severity, CheckSeverity.ERROR)


class TestCalibration(unittest.TestCase):
    """测试常数标定"""

    def test_c_bar_2(self):
        """测试标定值为正，且标定构型上的检查恰好成立"""
        sp = ScaleParams(M0=4, delta=0.25)
        k = CouplingKernel(1.3)
        tp = ThetaParams(1.3, 0.25)
        result = calibrate_c_bar_2(4, sp, k, tp)
        self.assertTrue(result.found)
        self.assertGreater(result.value, 0.0)

        length = result.details['length']
        base = IntegerInterval(0, length)
        region = expand(base, Fraction(3, 2))
        sigma = SpinConfiguration.from_minus_sites(result.argmin, region.start, region.stop)
        check = balanced_interaction_check(base, sigma, sp, tp, k, result.value)
        self.assertTrue(check.passed)
        self.assertAlmostEqual(check.ratio, 1.0)

    def test_constant_sigma_rejected(self):
        """测试 I 上为常数的构型报错"""
        sp = ScaleParams(M0=4, delta=0.25)
        sigma = SpinConfiguration.constant(8, 1, -2)
        with self.assertRaises(PreconditionError):
            balanced_interaction_check(IntegerInterval(0, 4), sigma, sp, ThetaParams(1.3, 0.25), CouplingKernel(1.3), 0.1)

    def test_c2(self):
        """测试 c2 标定值使全部构型的第一能量估计成立"""
        sp = ScaleParams(M0=1, delta=0.25)
        k = CouplingKernel(1.3)
        tp = ThetaParams(1.3, 0.25)
        result = calibrate_c2(2, sp, k, tp, 64)
        self.assertEqual(result.examined, 16)
        self.assertGreater(result.value, 0.0)
        for bits in itertools.product([1, -1], repeat=4):
            minus = [0] + [x for x, b in zip([-2, -1, 1, 2], bits) if b < 0]
            pr = peierls_map(SpinConfiguration.from_minus_sites(minus, -2, 3), sp)
            self.assertTrue(energy_bound_1_check(pr, k, tp, result.value, 64).passed)

    def test_guard(self):
        """测试标定规模上限"""
        with self.assertRaises(SizeGuardError):
            calibrate_c2(10, ScaleParams(M0=1, delta=0.25), CouplingKernel(1.3), ThetaParams(1.3, 0.25), 64)


class TestConstantsStore(unittest.TestCase):
    """测试常数文件"""

    def test_round_trip_and_replace(self):
        """测试写入、覆盖与读回"""
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'out', 'constants.yaml')
            store = ConstantsStore(path, version='0.1.0')
            store.put({'name': 'c2', 'alpha': 1.3, 'delta': 0.25, 'M0': 1, 'value': 0.5})
            store.put({'name': 'c2', 'alpha': 1.3, 'delta': 0.25, 'M0': 1, 'value': 0.4})
            store.put({'name': 'c_bar_2', 'alpha': 1.3, 'delta': 0.25, 'M0': 4, 'value': 0.2})
            store.save()

            loaded = ConstantsStore(path)
            self.assertEqual(len(loaded), 2)
            self.assertAlmostEqual(loaded.get('c2', 1.3, 0.25, 1), 0.4)
            self.assertEqual(loaded.records[0]['version'], '0.1.0')
            self.assertIsNone(loaded.get('c2', 1.4, 0.25, 1))


if __name__ == '__main__':
    unittest.main()
