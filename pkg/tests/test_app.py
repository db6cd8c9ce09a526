"""
单元测试：实验配置、实验应用与命令行
"""

import json
import os
import sys
import tempfile
import unittest
from unittest import mock
from pathlib import Path

import yaml

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.kernel.errors import ConfigError
from src.core.config import DEFAULTS, ExperimentConfig, deep_merge, validate
from src.core.app import EXIT_CONFIG, EXIT_FAILED, EXIT_OK, ExperimentApp
from src.core.progress_monitor import ProgressMonitor
from src.bounds.constants import ConstantsStore
from src.core.suites import (
    SEQUENCE01_REGRESSION,
    SuiteContext,
    good_event_family,
    good_event_suite,
    magnetization_suite,
    sequence_exhaustive,
)
from src.intervals import IntegerInterval
import cli


class TestExperimentConfig(unittest.TestCase):
    """测试实验配置"""

    def test_defaults_are_valid(self):
        """测试每个子命令的缺省配置都能通过校验"""
        for sub in DEFAULTS:
            config = ExperimentConfig.from_dict({}, sub)
            self.assertEqual(config.subcommand, sub)

    def test_missing_subcommand(self):
        """测试缺少子命令"""
        with self.assertRaises(ConfigError):
            ExperimentConfig.from_dict({})

    def test_diagnostics_are_collected(self):
        """测试一次收集全部诊断"""
        with self.assertRaises(ConfigError) as ctx:
            ExperimentConfig.from_dict({'model': {'beta': -1, 'cutoff': 0}, 'windw': 3}, 'simulate')
        text = ' '.join(ctx.exception.diagnostics)
        self.assertIn('model.beta', text)
        self.assertIn('model.cutoff', text)
        self.assertIn('windw', text)
        self.assertEqual(len(ctx.exception.diagnostics), 3)

    def test_alpha_above_dimension(self):
        """测试 α 必须大于维度"""
        with self.assertRaises(ConfigError):
            ExperimentConfig.from_dict({'model': {'alpha': 1.5}}, 'verify-2d')

    def test_overrides_win(self):
        """测试命令行覆盖优先"""
        config = ExperimentConfig.from_dict({'seed': 3, 'window': 10}, 'simulate', {'seed': 7})
        self.assertEqual(config.seed, 7)
        self.assertEqual(config.get('window'), 10)
        self.assertEqual(config.get('simulate.chains'), 2)
        self.assertEqual(config.section()['chains'], 2)

    def test_deep_merge(self):
        """测试递归合并不修改输入"""
        base = {'a': {'b': 1, 'c': 2}}
        merged = deep_merge(base, {'a': {'c': 3}})
        self.assertEqual(merged, {'a': {'b': 1, 'c': 3}})
        self.assertEqual(base['a']['c'], 2)

    def test_unknown_subcommand(self):
        """测试未知子命令"""
        self.assertTrue(validate('plot', {}))

    def test_load_and_save(self):
        """测试 YAML 读写"""
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'exp.yaml')
            with open(path, 'w', encoding='utf-8') as f:
                yaml.dump({'subcommand': 'simulate', 'sweeps': 50}, f)
            config = ExperimentConfig.load(path)
            self.assertEqual(config.get('sweeps'), 50)
            out = os.path.join(tmp, 'resolved.yaml')
            config.save(out)
            again = ExperimentConfig.load(out)
            self.assertEqual(again.to_dict(), config.to_dict())

    def test_empty_file(self):
        """测试空配置文件报错"""
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'empty.yaml')
            Path(path).write_text('', encoding='utf-8')
            with self.assertRaises(ConfigError):
                ExperimentConfig.load(path, 'verify-1d')

    def test_conflicting_subcommand(self):
        """测试文件与命令行的子命令不一致"""
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'exp.yaml')
            Path(path).write_text('subcommand: calibrate\n', encoding='utf-8')
            with self.assertRaises(ConfigError):
                ExperimentConfig.load(path, 'simulate')


def _simulate_config(out, **extra):
    data = {
        'window': 6,
        'seeds': [0, 1],
        'sweeps': 100,
        'model': {'cutoff': 100},
        'simulate': {'betas': [0.0], 'epsilons': [0.0, 0.5], 'stationary_window': 0, 'trend_axes': []},
        'output': {'dir': out, 'formats': ['csv', 'json']},
        'constants': os.path.join(out, 'constants.yaml'),
    }
    return ExperimentConfig.from_dict(deep_merge(data, extra), 'simulate')


def _calibrate_config(out, constants):
    return ExperimentConfig.from_dict({
        'calibrate': {'c_bar_2_max_length': 4, 'c2_half_width': 2, 'mixing_side': 32,
                      'mixing_ms': [1, 2, 3], 'mixing_trials': 1, 'mixing_steps': 200,
                      'mixing_residual': 10.0},
        'scale': {'M0': 4},
        'output': {'dir': out},
        'constants': constants,
    }, 'calibrate')


class TestExperimentApp(unittest.TestCase):
    """测试实验应用"""

    def test_simulate_beta_zero(self):
        """测试 β = 0 网格上磁化列为 0.5，且写出全部文件"""
        with tempfile.TemporaryDirectory() as tmp:
            app = ExperimentApp(_simulate_config(tmp), ProgressMonitor())
            self.assertEqual(app.run(), EXIT_OK)
            out = Path(tmp)
            for name in ('resolved_config.yaml', 'run_metadata.json', 'summary.json',
                         'magnetization.csv', 'magnetization.json', 'checks.csv'):
                self.assertTrue((out / name).exists(), name)
            rows = json.loads((out / 'magnetization.json').read_text(encoding='utf-8'))
            self.assertEqual([r['estimate'] for r in rows], [0.5, 0.5])
            summary = json.loads((out / 'summary.json').read_text(encoding='utf-8'))
            self.assertTrue(summary['valid'])
            self.assertEqual(summary['subcommand'], 'simulate')

    def test_rerun_is_byte_identical(self):
        """测试相同配置与种子的 CSV 逐字节一致"""
        with tempfile.TemporaryDirectory() as a, tempfile.TemporaryDirectory() as b:
            ExperimentApp(_simulate_config(a, simulate={'epsilons': [0.5]}), ProgressMonitor()).run()
            ExperimentApp(_simulate_config(b, simulate={'epsilons': [0.5]}), ProgressMonitor()).run()
            for name in ('magnetization.csv', 'checks.csv'):
                self.assertEqual((Path(a) / name).read_bytes(), (Path(b) / name).read_bytes())

    def test_enumerate_contours(self):
        """测试轮廓计数子命令"""
        with tempfile.TemporaryDirectory() as tmp:
            config = ExperimentConfig.from_dict({
                'enumerate_contours': {'sizes': [1, 5]},
                'output': {'dir': tmp},
                'constants': os.path.join(tmp, 'constants.yaml'),
            }, 'enumerate-contours')
            self.assertEqual(ExperimentApp(config, ProgressMonitor()).run(), EXIT_OK)
            rows = json.loads((Path(tmp) / 'contour_counts.json').read_text(encoding='utf-8'))
            self.assertEqual(rows[0]['count'], 0)
            self.assertGreater(rows[1]['count'], 0)
            self.assertTrue((Path(tmp) / 'contour_shapes.jsonl').exists())

    def test_calibrate_persists_constants(self):
        """测试标定结果写入常数文件"""
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'constants.yaml')
            ExperimentApp(_calibrate_config(tmp, path), ProgressMonitor()).run()
            store = ConstantsStore(path)
            self.assertIsNotNone(store.get('c_bar_2', 1.3, 0.25, 4))
            self.assertIsNotNone(store.get('c2', 1.3, 0.25, 4))
            self.assertIsNotNone(store.get('b8', 3.0, 0.0, 32))

    def test_calibrate_keeps_b8_floor(self):
        """测试 b8 低于已记录下界时退出码为1且下界不被覆盖"""
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'constants.yaml')
            seeded = ConstantsStore(path)
            seeded.put({'name': 'b8', 'alpha': 3.0, 'delta': 0.0, 'M0': 32, 'value': 1e9})
            seeded.save()
            code = ExperimentApp(_calibrate_config(tmp, path), ProgressMonitor()).run()
            self.assertEqual(code, EXIT_FAILED)
            summary = json.loads((Path(tmp) / 'summary.json').read_text(encoding='utf-8'))
            failed = [o['name'] for o in summary['outcomes'] if not o['passed']]
            self.assertIn('calibration.b8_regression', failed)
            self.assertEqual(ConstantsStore(path).get('b8', 3.0, 0.0, 32), 1e9)


CONFIG_DIR = Path(__file__).resolve().parent.parent / 'config'


class TestSuites(unittest.TestCase):
    """测试子命令检查套件"""

    def test_sequence_regression(self):
        """测试 N=4, λ=1.9 的回归值为3"""
        config = ExperimentConfig.from_dict(
            {'verify_1d': {'sequence_max_n': 4, 'sequence_lambdas': [1.9]}}, 'verify-1d')
        outcomes = {o.name: o for o in sequence_exhaustive(SuiteContext(config))}
        regression = outcomes['bounds.sequence01_regression']
        self.assertTrue(regression.passed)
        self.assertEqual(regression.value, 3.0)
        self.assertEqual(SEQUENCE01_REGRESSION[2], 3)

    def test_epsilon_trend(self):
        """测试 ε 轴趋势按递增判定"""
        config = ExperimentConfig.from_dict({
            'simulate': {'betas': [3.0], 'epsilons': [0.0, 0.5, 1.0], 'trend_axes': ['epsilon'],
                         'stationary_window': 0},
        }, 'simulate')

        def rows(estimates):
            return [{'alpha': 1.3, 'beta': 3.0, 'epsilon': e, 'estimate': m, 'stderr': 0.01,
                     'sweeps': 100, 'kept': 50} for e, m in zip((0.0, 0.5, 1.0), estimates)]

        with mock.patch('src.core.suites.magnetization_experiment', return_value=rows([0.01, 0.1, 0.3])):
            outcomes = {o.name: o for o in magnetization_suite(SuiteContext(config))}
        self.assertTrue(outcomes['simulation.trend_epsilon'].passed)
        self.assertNotIn('simulation.trend_beta', outcomes)

        with mock.patch('src.core.suites.magnetization_experiment', return_value=rows([0.3, 0.1, 0.01])):
            outcomes = {o.name: o for o in magnetization_suite(SuiteContext(config))}
        self.assertFalse(outcomes['simulation.trend_epsilon'].passed)

    def test_good_event_uses_balanced_family(self):
        """测试好事件在宿主区间的非空平衡集合族上计算"""
        config = ExperimentConfig.from_dict({
            'window': 6,
            'delta_tail': {'good_event_host': 4, 'good_event_seeds': 3, 'good_event_epsilons': [0.0, 1.0]},
        }, 'delta-tail')
        ctx = SuiteContext(config)
        family = good_event_family(ctx)
        self.assertEqual(family.host, IntegerInterval(-2, 2))
        for A in family.members:
            self.assertTrue(A)
            self.assertTrue(all(-2 <= x < 2 for x in A))
        outcomes = {o.name: o for o in good_event_suite(ctx)}
        self.assertTrue(outcomes['disorder.good_event_zero_field'].passed)
        self.assertEqual([r['family_size'] for r in ctx.tables['good_event']], [len(family)] * 2)

    def test_shipped_configs(self):
        """测试随附的配置文件都能通过校验"""
        example = ExperimentConfig.load(str(CONFIG_DIR / 'experiment.example.yaml'))
        self.assertIn(0.0, example.get('simulate.betas'))
        eps = ExperimentConfig.load(str(CONFIG_DIR / 'simulate_epsilon.yaml'))
        self.assertEqual(eps.get('simulate.trend_axes'), ['epsilon'])
        self.assertEqual(eps.get('simulate.epsilons'), [0.0, 0.5, 1.0])
        two = ExperimentConfig.load(str(CONFIG_DIR / 'simulate_2d.yaml'))
        self.assertEqual(two.get('model.dimension'), 2)
        self.assertEqual(two.get('window'), 48)


class TestCli(unittest.TestCase):
    """测试命令行"""

    def test_empty_config_exits_nonzero(self):
        """测试空配置文件得到非零退出码"""
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'empty.yaml')
            Path(path).write_text('', encoding='utf-8')
            self.assertEqual(cli.main(['verify-1d', '--config', path]), EXIT_CONFIG)

    def test_invalid_flag_value(self):
        """测试非法参数值得到配置错误"""
        with tempfile.TemporaryDirectory() as tmp:
            self.assertEqual(cli.main(['simulate', '--beta', '-1', '--out', tmp]), EXIT_CONFIG)

    def test_simulate_overrides(self):
        """测试 simulate 的单点覆盖"""
        args = cli.build_parser().parse_args(['simulate', '--alpha', '1.2', '--beta', '0', '--seed', '4'])
        overrides = cli.build_overrides(args)
        self.assertEqual(overrides['simulate'], {'alphas': [1.2], 'betas': [0.0]})
        self.assertEqual(overrides['model'], {'alpha': 1.2, 'beta': 0.0})
        self.assertEqual(overrides['seed'], 4)

    def test_run_simulate(self):
        """测试命令行运行 β = 0 的模拟"""
        with tempfile.TemporaryDirectory() as tmp:
            config_path = os.path.join(tmp, 'sim.yaml')
            with open(config_path, 'w', encoding='utf-8') as f:
                yaml.dump({
                    'subcommand': 'simulate', 'window': 4, 'seeds': [0], 'sweeps': 20,
                    'model': {'cutoff': 50},
                    'simulate': {'stationary_window': 0, 'trend_axes': [], 'epsilons': [0.0]},
                    'constants': os.path.join(tmp, 'constants.yaml'),
                }, f)
            code = cli.main(['simulate', '--config', config_path, '--beta', '0', '--out', tmp])
            self.assertEqual(code, 0)
            self.assertTrue((Path(tmp) / 'summary.json').exists())


if __name__ == '__main__':
    unittest.main()
