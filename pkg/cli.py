#!/usr/bin/env python
"""
命令行工具
以子命令运行验证套件、无序外场估计、Metropolis 模拟、轮廓计数与常数标定
"""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from src.core.app import EXIT_CONFIG, ExperimentApp
from src.core.config import SUBCOMMANDS, ExperimentConfig
from src.kernel.errors import ConfigError

logger = logging.getLogger("cli")


def build_parser() -> argparse.ArgumentParser:
    """构建参数解析器"""
    parser = argparse.ArgumentParser(
        prog="lr-rfim",
        description="长程随机场 Ising 模型验证工具包",
    )
    parser.add_argument('--log-level', default='INFO', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help='日志级别（默认 INFO）')
    sub = parser.add_subparsers(dest='subcommand', required=True)
    helps = {
        'verify-1d': '一维平衡过程、能量估计与熵检查',
        'verify-2d': '二维轮廓与粗粒化检查',
        'delta-tail': 'Δ_A 恒等式、次高斯尾部与好事件频率',
        'simulate': 'Metropolis 磁化实验',
        'enumerate-contours': '小规模轮廓计数',
        'calibrate': '常数标定',
    }
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument('--config', help='YAML 配置文件')
        p.add_argument('--seed', type=int, help='根随机种子')
        p.add_argument('--out', help='输出目录')
        p.add_argument('--jobs', type=int, help='进程数（0 表示全部核心）')
        p.add_argument('--alpha', type=float, help='衰减指数 α')
        p.add_argument('--beta', type=float, help='逆温度 β')
        p.add_argument('--epsilon', type=float, help='外场强度 ε')
        p.add_argument('--window', type=int, help='窗口大小（一维为半宽或格点数，二维为边长）')
    return parser


def build_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """
    命令行参数转换为配置覆盖项

    simulate 的 --alpha/--beta/--epsilon 同时把对应网格收缩为单点。
    """
    overrides: Dict[str, Any] = {}
    if args.seed is not None:
        overrides['seed'] = args.seed
    if args.out is not None:
        overrides['output'] = {'dir': args.out}
    if args.jobs is not None:
        overrides['jobs'] = args.jobs
    if args.window is not None:
        overrides['window'] = args.window
    model = {}
    grid = {}
    for key, plural in (('alpha', 'alphas'), ('beta', 'betas'), ('epsilon', 'epsilons')):
        value = getattr(args, key)
        if value is not None:
            model[key] = value
            grid[plural] = [value]
    if model:
        overrides['model'] = model
    if grid and args.subcommand == 'simulate':
        overrides['simulate'] = grid
    return overrides


def main(argv: Optional[List[str]] = None) -> int:
    """程序入口，返回退出码"""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
    )
    overrides = build_overrides(args)
    try:
        if args.config:
            config = ExperimentConfig.load(args.config, args.subcommand, overrides)
        else:
            config = ExperimentConfig.from_dict({}, args.subcommand, overrides)
    except ConfigError as e:
        for line in e.diagnostics:
            logger.error(f"配置错误: {line}")
        print(f"配置无效 ({args.subcommand})，共 {len(e.diagnostics)} 处问题", file=sys.stderr)
        return EXIT_CONFIG

    app = ExperimentApp(config)
    code = app.run()
    print(f"{args.subcommand}: {'通过' if code == 0 else '失败'}，结果位于 {config.output_dir}")
    return code


if __name__ == '__main__':
    sys.exit(main())
