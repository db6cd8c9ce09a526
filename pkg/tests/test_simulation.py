"""
单元测试：Metropolis 模拟模块
"""

import math
import os
import sys
import unittest

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.kernel import CouplingKernel, HamiltonianParams, SizeGuardError, StructuralError
from src.core.parallel import make_rng
from src.disorder import ExactGibbs, sample_field
from src.simulation import (
    ChainJob,
    ChainState,
    in_theorem_range,
    kept_sweeps,
    infinite_temperature_check,
    magnetization_experiment,
    metropolis_sweep,
    run_chain,
    stationary_tv_check,
    trend_check,
)


def _state(n=8, beta=1.0, epsilon=0.0, seed=0, h=None):
    k = CouplingKernel(1.3, 1)
    params = HamiltonianParams(beta=beta, epsilon=epsilon, cutoff=200)
    return ChainState.start((n,), k, params, make_rng(seed), h)


class TestMetropolisSweep(unittest.TestCase):
    """测试单次扫描"""

    def test_infinite_temperature_accepts_all(self):
        """测试 β = 0 时每个提议都被接受"""
        state = _state()
        metropolis_sweep(state, 0.0)
        self.assertEqual(state.accepted, 8)
        self.assertTrue(np.all(state.spins == -1))
        self.assertEqual(state.sweeps, 1)

    def test_zero_temperature_keeps_plus(self):
        """测试 β = ∞、h ≡ 0 时全正构型不动"""
        state = _state()
        for _ in range(5):
            metropolis_sweep(state, math.inf)
        self.assertEqual(state.accepted, 0)
        self.assertTrue(np.all(state.spins == 1))

    def test_cache_coherence(self):
        """测试缓存局部场与重算一致"""
        h = sample_field(8, 3, 0.7)
        state = _state(h=h)
        state.refresh_every = 7
        for _ in range(50):
            metropolis_sweep(state, 0.5)
        self.assertLessEqual(state.refresh(), 1e-7)
        state.local[0] += 1.0
        with self.assertRaises(StructuralError):
            state.refresh()

    def test_energy_matches_enumeration(self):
        """测试链的能量与精确枚举一致"""
        k = CouplingKernel(1.3, 1)
        params = HamiltonianParams(beta=0.5, cutoff=200)
        g = ExactGibbs.interval(0, 5, k, params)
        h = sample_field(5, 2, 0.4)
        state = ChainState.from_gibbs(g, make_rng(1), h)
        energies = g.energies(h)
        for _ in range(10):
            metropolis_sweep(state, 0.5)
            self.assertAlmostEqual(state.energy(), energies[state.code()], places=9)


class TestStationary(unittest.TestCase):
    """测试平稳分布"""

    def test_total_variation(self):
        """测试 |Λ| = 4 上的经验分布接近精确吉布斯测度"""
        k = CouplingKernel(1.3, 1)
        g = ExactGibbs.interval(0, 4, k, HamiltonianParams(beta=0.4, epsilon=0.5, cutoff=50))
        h = sample_field(4, 5, 0.5)
        outcome = stationary_tv_check(g, h, 20000, seed=2, tolerance=0.04)
        self.assertTrue(outcome.passed, outcome.value)

    def test_guard(self):
        """测试窗口规模上限"""
        g = ExactGibbs.interval(0, 13, CouplingKernel(1.3, 1), HamiltonianParams(cutoff=50))
        with self.assertRaises(SizeGuardError):
            stationary_tv_check(g, None, 10)


class TestExperiment(unittest.TestCase):
    """测试磁化实验"""

    def test_theorem_range(self):
        """测试定理参数范围"""
        self.assertTrue(in_theorem_range(1.3, 1))
        self.assertFalse(in_theorem_range(1.5, 1))
        self.assertTrue(in_theorem_range(3.0, 2))
        self.assertFalse(in_theorem_range(2.0, 2))

    def test_seed_determinism(self):
        """测试同一输入得到相同结果"""
        job = ChainJob(1.3, 0.3, 0.5, 1, 8, field_seed=4, chain=1, root_seed=9, sweeps=60, cutoff=100)
        self.assertEqual(run_chain(job), run_chain(job))

    def test_beta_zero(self):
        """测试 β = 0 时估计为 0.5"""
        rows = magnetization_experiment([1.3], [0.0], [0.0, 0.5], side=6, field_seeds=(0, 1),
                                        chains=2, sweeps=100, cutoff=100)
        self.assertEqual(len(rows), 2)
        for row in rows:
            self.assertAlmostEqual(row['estimate'], 0.5)
        self.assertTrue(infinite_temperature_check(rows).passed)

    def test_beta_zero_odd_sweeps(self):
        """测试扫描数为奇数时 β = 0 的估计仍为 0.5"""
        rows = magnetization_experiment([1.3], [0.0], [0.1], side=8, field_seeds=(0, 1, 2, 3),
                                        chains=2, sweeps=101, cutoff=100)
        self.assertEqual(rows[0]['kept'], 50)
        self.assertAlmostEqual(rows[0]['estimate'], 0.5)
        self.assertEqual(rows[0]['stderr'], 0.0)
        self.assertTrue(infinite_temperature_check(rows).passed)

    def test_kept_sweeps(self):
        """测试保留扫描数取偶数"""
        self.assertEqual(kept_sweeps(100), 50)
        self.assertEqual(kept_sweeps(101), 50)
        self.assertEqual(kept_sweeps(7), 4)
        self.assertEqual(kept_sweeps(1), 1)

    def test_beta_zero_resolution(self):
        """测试标准误为 0 时按单个样本的分辨率判定"""
        row = {'alpha': 1.3, 'beta': 0.0, 'epsilon': 0.0, 'stderr': 0.0, 'sweeps': 3, 'kept': 1}
        self.assertTrue(infinite_temperature_check([dict(row, estimate=1.0)]).passed)
        row.update(sweeps=101, kept=51)
        self.assertTrue(infinite_temperature_check([dict(row, estimate=0.5 + 0.5 / 51)]).passed)
        self.assertFalse(infinite_temperature_check([dict(row, estimate=0.6)]).passed)

    def test_beta_trend(self):
        """测试 β 增大时 σ_0 = -1 的概率下降"""
        rows = magnetization_experiment([1.3], [0.05, 1.0], [0.1], side=12, field_seeds=(0, 1),
                                        chains=2, sweeps=200, cutoff=100)
        self.assertGreater(rows[0]['estimate'], rows[1]['estimate'])

    def test_range_warning(self):
        """测试超出定理范围只记录警告"""
        with self.assertLogs('src.simulation.experiment', level='WARNING'):
            rows = magnetization_experiment([1.8], [0.5], [0.0], side=4, chains=1, sweeps=10, cutoff=50)
        self.assertFalse(rows[0]['in_range'])

    def test_trend_check(self):
        """测试趋势判定"""
        rows = [
            {'alpha': 1.3, 'beta': b, 'epsilon': 0.1, 'estimate': e, 'stderr': 0.01}
            for b, e in ((0.5, 0.4), (1.0, 0.3), (2.0, 0.1))
        ]
        self.assertTrue(trend_check(rows, 'beta', increasing=False).passed)
        self.assertFalse(trend_check(rows, 'beta', increasing=True).passed)
        rows[1]['estimate'] = 0.39
        self.assertFalse(trend_check(rows, 'beta', increasing=False).passed)


if __name__ == '__main__':
    unittest.main()
