"""
实验应用主类
加载配置、运行子命令套件、写出结果文件并给出退出码
"""

import logging
import platform
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import scipy

from .. import __version__
from ..bounds.constants import ConstantsStore
from ..output.exporter import JSONExporter, JSONLinesExporter, export_table
from .config import ExperimentConfig
from .progress_monitor import ProgressMonitor, logging_callback
from .suites import SuiteResult, run_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


class ExperimentApp:
    """
    实验应用
    提供子命令的运行、结果导出和运行记录
    """

    def __init__(self, config: ExperimentConfig, monitor: Optional[ProgressMonitor] = None):
        """
        初始化应用

        Args:
            config: 已校验的实验配置
            monitor: 进度监控器，缺省时创建一个写日志的监控器
        """
        self.config = config
        self.monitor = monitor or ProgressMonitor()
        if monitor is None:
            self.monitor.add_callback(logging_callback)
        self.written: List[str] = []

    @property
    def output_dir(self) -> Path:
        return self.config.output_dir

    def constants_path(self) -> Path:
        """常数文件路径，各子命令共用"""
        return Path(self.config.get('constants'))

    def run(self) -> int:
        """
        运行子命令

        Returns:
            int: 退出码，全部硬断言通过为0，否则为1
        """
        started = datetime.now(timezone.utc)
        clock = time.perf_counter()
        logger.info(f"运行 {self.config.subcommand}，输出目录 {self.output_dir}")
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.config.save(str(self.output_dir / 'resolved_config.yaml'))
        self.written.append(str(self.output_dir / 'resolved_config.yaml'))

        store = ConstantsStore(str(self.constants_path()), version=__version__)
        result = run_suite(self.config, store, self.monitor)
        if self.config.subcommand in ('calibrate', 'verify-1d') and len(store):
            store.save()
            self.written.append(str(self.constants_path()))

        self.export_results(result)
        self.write_metadata(started, time.perf_counter() - clock)

        report = result.report
        if report.is_valid():
            logger.info(f"{self.config.subcommand}: 全部硬断言通过")
            return EXIT_OK
        for outcome in report.failures():
            logger.error(f"失败: {outcome.name} {outcome.message}")
        return EXIT_FAILED

    def export_results(self, result: SuiteResult):
        """
        写出数据表与 summary.json

        Args:
            result: 套件结果
        """
        formats = self.config.get('output.formats')
        for stem, rows in result.tables.items():
            self.written.extend(export_table(rows, str(self.output_dir), stem, formats))
        for stem, rows in result.jsonl_tables.items():
            path = str(self.output_dir / f"{stem}.jsonl")
            JSONLinesExporter().export(rows, path)
            self.written.append(path)
        self.written.extend(export_table(result.report.rows(), str(self.output_dir), 'checks',
                                         [f for f in formats if f != 'json']))
        summary = dict(result.report.to_dict(), subcommand=self.config.subcommand)
        path = str(self.output_dir / 'summary.json')
        JSONExporter().export(summary, path)
        self.written.append(path)

    def write_metadata(self, started: datetime, elapsed: float):
        """运行记录单独写入 run_metadata.json，数据文件中不含时间戳"""
        metadata: Dict[str, Any] = {
            'subcommand': self.config.subcommand,
            'started': started.isoformat(),
            'elapsed_seconds': round(elapsed, 3),
            'seed': self.config.seed,
            'jobs': self.config.jobs,
            'versions': {
                'toolkit': __version__,
                'python': platform.python_version(),
                'numpy': np.__version__,
                'scipy': scipy.__version__,
            },
            'files': sorted(self.written),
        }
        JSONExporter().export(metadata, str(self.output_dir / 'run_metadata.json'))
