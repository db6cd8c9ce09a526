"""
实验配置
YAML 文件 + 命令行覆盖，按子命令的模式校验并收集全部诊断
"""

import copy
import logging
import numbers
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import yaml

from ..kernel.errors import ConfigError

logger = logging.getLogger(__name__)

SUBCOMMANDS = ('verify-1d', 'verify-2d', 'delta-tail', 'simulate', 'enumerate-contours', 'calibrate')

_COMMON = {
    'seed': 0,
    'jobs': 1,
    'output': {'dir': 'output', 'formats': ['csv', 'json']},
    'constants': 'constants.yaml',
}

# 每个子命令的缺省配置；文件与命令行参数在此基础上逐层覆盖
DEFAULTS: Dict[str, Dict[str, Any]] = {
    'verify-1d': {
        'model': {'dimension': 1, 'alpha': 1.3, 'beta': 1.0, 'epsilon': 0.0, 'cutoff': 10000,
                  'pair_convention': 'ordered'},
        'scale': {'M0': 1, 'delta': 0.25, 'c1': 10},
        'window': 5,
        'verify_1d': {
            'interaction_max_length': 12,
            'interaction_alphas': [1.1, 1.3, 1.49],
            'sequence_max_n': 14,
            'sequence_lambdas': [1.0, 1.9, 3.0],
            'approx_max_length': 200,
            'approx_left_range': [-300, 300],
            'energy_scale': {'M0': 1024, 'delta': 0.001, 'c1': 10},
            'entropy_host': 8,
            'write_traces': False,
        },
    },
    'verify-2d': {
        'model': {'dimension': 2, 'alpha': 3.0, 'beta': 1.0, 'epsilon': 0.0, 'cutoff': 256,
                  'pair_convention': 'ordered'},
        'partition': {'M': 2},
        'coarse': {'r': 5},
        'window': 64,
        'verify_2d': {
            'partition_sets': 200,
            'partition_max_size': 7,
            'partition_Ms': [2, 10],
            'coarse_sets': 200,
            'coarse_alphas': [2.5, 3.0],
            'large_int_sets': 100,
            'iso_sides': [3, 4],
            'iso_cs': [0.25, 0.5],
            'contour_samples': 20,
            'contour_window': 16,
            'contour_density': 0.3,
            'contour_cutoff': 32,
        },
    },
    'delta-tail': {
        'model': {'dimension': 1, 'alpha': 1.3, 'beta': 1.0, 'epsilon': 0.5, 'cutoff': 10000,
                  'pair_convention': 'ordered'},
        'scale': {'M0': 1, 'delta': 0.25, 'c1': 10},
        'window': 12,
        'delta_tail': {
            'samples': 100000,
            'epsilons': [0.25, 0.5, 1.0],
            'lambdas': [0.5, 1.0, 2.0],
            'sym_diffs': [1, 4, 8],
            'good_event_epsilons': [0.0, 0.5, 1.0, 2.0],
            'good_event_host': 6,
            'good_event_seeds': 20,
            'good_event_fraction': 0.1,
        },
    },
    'simulate': {
        'model': {'dimension': 1, 'alpha': 1.3, 'beta': 1.0, 'epsilon': 0.1, 'cutoff': 10000,
                  'pair_convention': 'ordered'},
        'window': 32,
        'seeds': [0, 1, 2, 3],
        'sweeps': 2000,
        'simulate': {
            'alphas': [1.3],
            'betas': [0.0, 0.5, 1.0, 2.0, 4.0],
            'epsilons': [0.1],
            'chains': 2,
            'trend_axes': ['beta'],
            'stationary_window': 6,
            # 64 个状态上 TV <= 0.01 需要约 1e7 次扫描
            'stationary_sweeps': 10_000_000,
            'stationary_tolerance': 0.01,
        },
    },
    'enumerate-contours': {
        'model': {'dimension': 2, 'alpha': 3.0, 'beta': 1.0, 'epsilon': 0.0, 'cutoff': 256,
                  'pair_convention': 'ordered'},
        'partition': {'M': 2},
        'enumerate_contours': {'sizes': [4, 6, 8]},
    },
    'calibrate': {
        'model': {'dimension': 1, 'alpha': 1.3, 'beta': 1.0, 'epsilon': 0.0, 'cutoff': 10000,
                  'pair_convention': 'ordered'},
        'scale': {'M0': 1, 'delta': 0.25, 'c1': 10},
        'coarse': {'r': 5},
        'calibrate': {
            'c_bar_2_max_length': 6,
            'c2_half_width': 5,
            'mixing_side': 32,
            'mixing_ms': [1, 4, 16, 64, 256],
            'mixing_trials': 4,
            'mixing_steps': 20000,
            'mixing_residual': 0.2,
        },
    },
}


def _is_number(v) -> bool:
    return isinstance(v, numbers.Real) and not isinstance(v, bool)


def _is_int(v) -> bool:
    return isinstance(v, numbers.Integral) and not isinstance(v, bool)


def _positive(v) -> bool:
    return _is_number(v) and v > 0


def _positive_int(v) -> bool:
    return _is_int(v) and v > 0


def _non_negative(v) -> bool:
    return _is_number(v) and v >= 0


def _list_of(pred: Callable[[Any], bool]) -> Callable[[Any], bool]:
    return lambda v: isinstance(v, list) and len(v) > 0 and all(pred(x) for x in v)


Rule = Tuple[Callable[[Any], bool], str]

_MODEL_RULES: Dict[str, Rule] = {
    'model.dimension': (lambda v: v in (1, 2), "必须是1或2"),
    'model.alpha': (_positive, "必须为正数"),
    'model.beta': (_non_negative, "必须为非负数"),
    'model.epsilon': (_non_negative, "必须为非负数"),
    'model.cutoff': (_positive_int, "必须为正整数"),
    'model.pair_convention': (lambda v: v in ('ordered', 'unordered'), "必须是 ordered 或 unordered"),
    'seed': (_is_int, "必须为整数"),
    'jobs': (lambda v: _is_int(v) and v >= 0, "必须为非负整数（0 表示全部核心）"),
    'output.dir': (lambda v: isinstance(v, str) and bool(v), "必须为非空字符串"),
    'output.formats': (_list_of(lambda f: f in ('csv', 'json', 'jsonl', 'xlsx')), "只能包含 csv/json/jsonl/xlsx"),
    'constants': (lambda v: isinstance(v, str) and bool(v), "必须为非空字符串"),
}

_SCALE_RULES: Dict[str, Rule] = {
    'scale.M0': (lambda v: _is_number(v) and v >= 1, "必须不小于1"),
    'scale.delta': (lambda v: _is_number(v) and 0 < v < 1, "必须在 (0, 1) 内"),
    'scale.c1': (_positive, "必须为正数"),
}

SCHEMAS: Dict[str, Dict[str, Rule]] = {
    'verify-1d': {
        **_MODEL_RULES, **_SCALE_RULES,
        'window': (_positive_int, "Λ 的半宽，必须为正整数"),
        'verify_1d.interaction_max_length': (_positive_int, "必须为正整数"),
        'verify_1d.interaction_alphas': (_list_of(lambda a: _is_number(a) and 1 < a < 2), "必须是 (1, 2) 内的数"),
        'verify_1d.sequence_max_n': (_positive_int, "必须为正整数"),
        'verify_1d.sequence_lambdas': (_list_of(_positive), "必须是正数列表"),
        'verify_1d.approx_max_length': (_positive_int, "必须为正整数"),
        'verify_1d.approx_left_range': (lambda v: isinstance(v, list) and len(v) == 2 and all(map(_is_int, v)) and v[0] <= v[1],
                                        "必须是 [下界, 上界] 整数对"),
        'verify_1d.energy_scale.M0': (lambda v: _is_number(v) and v >= 1, "必须不小于1"),
        'verify_1d.energy_scale.delta': (lambda v: _is_number(v) and 0 < v < 1, "必须在 (0, 1) 内"),
        'verify_1d.energy_scale.c1': (_positive, "必须为正数"),
        'verify_1d.entropy_host': (_positive_int, "必须为正整数"),
        'verify_1d.write_traces': (lambda v: isinstance(v, bool), "必须为布尔值"),
    },
    'verify-2d': {
        **_MODEL_RULES,
        'partition.M': (_positive, "必须为正数"),
        'coarse.r': (lambda v: _is_int(v) and v > 4, "必须是大于4的整数"),
        'window': (_positive_int, "窗口边长，必须为正整数"),
        'verify_2d.partition_sets': (_positive_int, "必须为正整数"),
        'verify_2d.partition_max_size': (lambda v: _positive_int(v) and v <= 9, "必须在 [1, 9] 内"),
        'verify_2d.partition_Ms': (_list_of(_positive), "必须是正数列表"),
        'verify_2d.coarse_sets': (_positive_int, "必须为正整数"),
        'verify_2d.coarse_alphas': (_list_of(lambda a: _is_number(a) and 2 < a <= 3), "必须是 (2, 3] 内的数"),
        'verify_2d.large_int_sets': (_positive_int, "必须为正整数"),
        'verify_2d.iso_sides': (_list_of(_positive_int), "必须是正整数列表"),
        'verify_2d.iso_cs': (_list_of(lambda c: _is_number(c) and 0 < c <= 0.5), "必须是 (0, 0.5] 内的数"),
        'verify_2d.contour_samples': (_positive_int, "必须为正整数"),
        'verify_2d.contour_window': (_positive_int, "必须为正整数"),
        'verify_2d.contour_density': (lambda v: _is_number(v) and 0 <= v <= 1, "必须在 [0, 1] 内"),
        'verify_2d.contour_cutoff': (_positive_int, "必须为正整数"),
    },
    'delta-tail': {
        **_MODEL_RULES, **_SCALE_RULES,
        'window': (lambda v: _positive_int(v) and v <= 14, "|Λ| 必须在 [1, 14] 内"),
        'delta_tail.samples': (_positive_int, "必须为正整数"),
        'delta_tail.epsilons': (_list_of(_positive), "必须是正数列表"),
        'delta_tail.lambdas': (_list_of(_positive), "必须是正数列表"),
        'delta_tail.sym_diffs': (_list_of(_positive_int), "必须是正整数列表"),
        'delta_tail.good_event_epsilons': (_list_of(_non_negative), "必须是非负数列表"),
        'delta_tail.good_event_host': (lambda v: _positive_int(v) and v <= 20, "平衡族宿主区间长度，必须在 [1, 20] 内"),
        'delta_tail.good_event_seeds': (_positive_int, "必须为正整数"),
        'delta_tail.good_event_fraction': (_positive, "必须为正数"),
    },
    'simulate': {
        **_MODEL_RULES,
        'window': (_positive_int, "窗口边长，必须为正整数"),
        'seeds': (_list_of(_is_int), "必须是整数列表"),
        'sweeps': (lambda v: _is_int(v) and v >= 2, "必须是不小于2的整数"),
        'simulate.alphas': (_list_of(_positive), "必须是正数列表"),
        'simulate.betas': (_list_of(_non_negative), "必须是非负数列表"),
        'simulate.epsilons': (_list_of(_non_negative), "必须是非负数列表"),
        'simulate.chains': (_positive_int, "必须为正整数"),
        'simulate.trend_axes': (lambda v: isinstance(v, list) and all(a in ('beta', 'epsilon') for a in v),
                                "只能包含 beta 与 epsilon"),
        'simulate.stationary_window': (lambda v: _is_int(v) and 0 <= v <= 12, "必须在 [0, 12] 内（0 表示跳过）"),
        'simulate.stationary_sweeps': (_positive_int, "必须为正整数"),
        'simulate.stationary_tolerance': (_positive, "必须为正数"),
    },
    'enumerate-contours': {
        **_MODEL_RULES,
        'partition.M': (_positive, "必须为正数"),
        'enumerate_contours.sizes': (_list_of(lambda n: _positive_int(n) and n <= 8), "必须是 [1, 8] 内的整数"),
    },
    'calibrate': {
        **_MODEL_RULES, **_SCALE_RULES,
        'coarse.r': (lambda v: _is_int(v) and v > 4, "必须是大于4的整数"),
        'calibrate.c_bar_2_max_length': (lambda v: _is_int(v) and v >= 2, "必须是不小于2的整数"),
        'calibrate.c2_half_width': (lambda v: _is_int(v) and 1 <= v <= 9, "必须在 [1, 9] 内"),
        'calibrate.mixing_side': (_positive_int, "必须为正整数"),
        'calibrate.mixing_ms': (_list_of(_positive_int), "必须是正整数列表"),
        'calibrate.mixing_trials': (_positive_int, "必须为正整数"),
        'calibrate.mixing_steps': (_positive_int, "必须为正整数"),
        'calibrate.mixing_residual': (_positive, "必须为正数"),
    },
}


def deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """递归合并，override 中的值优先"""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def _lookup(data: Dict[str, Any], dotted: str) -> Tuple[bool, Any]:
    node: Any = data
    for part in dotted.split('.'):
        if not isinstance(node, dict) or part not in node:
            return False, None
        node = node[part]
    return True, node


def _known_paths(schema: Dict[str, Rule]) -> List[str]:
    paths = set()
    for dotted in schema:
        parts = dotted.split('.')
        for i in range(1, len(parts) + 1):
            paths.add('.'.join(parts[:i]))
    return sorted(paths)


def _unknown_keys(data: Dict[str, Any], known: List[str], prefix: str = "") -> List[str]:
    unknown = []
    for key, value in data.items():
        path = f"{prefix}{key}"
        if path not in known:
            unknown.append(path)
        elif isinstance(value, dict) and any(k.startswith(path + '.') for k in known):
            unknown.extend(_unknown_keys(value, known, path + '.'))
    return unknown


def validate(subcommand: str, data: Dict[str, Any]) -> List[str]:
    """
    按子命令模式校验，返回全部诊断（为空表示合法）

    Args:
        subcommand: 子命令
        data: 已合并缺省值的配置
    """
    if subcommand not in SCHEMAS:
        return [f"未知的子命令: {subcommand}"]
    schema = SCHEMAS[subcommand]
    diagnostics = []
    for dotted, (check, hint) in schema.items():
        found, value = _lookup(data, dotted)
        if not found:
            diagnostics.append(f"{dotted}: 缺少必填项")
        elif not check(value):
            diagnostics.append(f"{dotted}: {hint}，得到 {value!r}")
    known = _known_paths(schema) + ['subcommand']
    for path in _unknown_keys(data, known):
        diagnostics.append(f"{path}: 未知配置项")
    model_found, dimension = _lookup(data, 'model.dimension')
    alpha_found, alpha = _lookup(data, 'model.alpha')
    if model_found and alpha_found and _is_number(alpha) and dimension in (1, 2) and not alpha > dimension:
        diagnostics.append(f"model.alpha: 必须大于维度 {dimension}，得到 {alpha!r}")
    return diagnostics


class ExperimentConfig:
    """
    一次运行的完整配置

    Attributes:
        subcommand: 子命令
        data: 合并缺省值、文件与命令行覆盖之后的配置树
    """

    def __init__(self, subcommand: str, data: Dict[str, Any]):
        self.subcommand = subcommand
        self.data = data

    @classmethod
    def from_dict(cls, data: Optional[Dict[str, Any]], subcommand: Optional[str] = None,
                  overrides: Optional[Dict[str, Any]] = None) -> 'ExperimentConfig':
        """
        从字典创建并校验配置

        Args:
            data: 配置文件内容
            subcommand: 子命令，缺省时取 data['subcommand']
            overrides: 命令行覆盖项（嵌套字典）

        Raises:
            ConfigError: 配置不合法，携带全部诊断
        """
        data = dict(data or {})
        sub = subcommand or data.get('subcommand')
        if sub not in DEFAULTS:
            raise ConfigError([f"subcommand: 必须是 {', '.join(SUBCOMMANDS)} 之一，得到 {sub!r}"], sub)
        data.pop('subcommand', None)
        merged = deep_merge(deep_merge(_COMMON, DEFAULTS[sub]), data)
        if overrides:
            merged = deep_merge(merged, overrides)
        diagnostics = validate(sub, merged)
        if diagnostics:
            raise ConfigError(diagnostics, sub)
        logger.debug(f"配置校验通过: {sub}")
        return cls(sub, merged)

    @classmethod
    def load(cls, path: str, subcommand: Optional[str] = None,
             overrides: Optional[Dict[str, Any]] = None) -> 'ExperimentConfig':
        """
        从 YAML 文件加载

        Raises:
            ConfigError: 文件为空、不是映射或内容不合法
        """
        with open(path, 'r', encoding='utf-8') as f:
            data = yaml.safe_load(f)
        if not data:
            raise ConfigError([f"{path}: 配置文件为空"], subcommand)
        if not isinstance(data, dict):
            raise ConfigError([f"{path}: 顶层必须是映射"], subcommand)
        file_sub = data.get('subcommand')
        if subcommand and file_sub and file_sub != subcommand:
            raise ConfigError([f"subcommand: 文件中为 {file_sub}，命令行为 {subcommand}"], subcommand)
        return cls.from_dict(data, subcommand, overrides)

    def save(self, path: str):
        """保存为 YAML 文件"""
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, 'w', encoding='utf-8') as f:
            yaml.dump(self.to_dict(), f, allow_unicode=True, sort_keys=False)

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典"""
        return {'subcommand': self.subcommand, **copy.deepcopy(self.data)}

    def get(self, dotted: str, default: Any = None) -> Any:
        """按点分路径取值"""
        found, value = _lookup(self.data, dotted)
        return value if found else default

    def section(self) -> Dict[str, Any]:
        """当前子命令专属的配置段"""
        return self.data.get(self.subcommand.replace('-', '_'), {})

    @property
    def output_dir(self) -> Path:
        return Path(self.data['output']['dir'])

    @property
    def seed(self) -> int:
        return int(self.data['seed'])

    @property
    def jobs(self) -> int:
        return int(self.data['jobs'])
