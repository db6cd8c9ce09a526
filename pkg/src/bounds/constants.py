"""
标定常数文件

YAML 格式，每条记录包含 name, alpha, delta, M0, value, version。
"""

import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

logger = logging.getLogger(__name__)

_TOLERANCE = 1e-12


def _same(a: float, b: float) -> bool:
    return math.isclose(float(a), float(b), rel_tol=_TOLERANCE, abs_tol=_TOLERANCE)


class ConstantsStore:
    """标定常数存储"""

    def __init__(self, path: Optional[str] = None, version: str = ""):
        """
        Args:
            path: 常数文件路径，存在时自动加载
            version: 写入新记录时附带的版本号
        """
        self.path = Path(path) if path else None
        self.version = version
        self.records: List[Dict[str, Any]] = []
        if self.path is not None and self.path.exists():
            self.load(str(self.path))

    def load(self, path: str):
        """从 YAML 文件加载"""
        with open(path, 'r', encoding='utf-8') as f:
            data = yaml.safe_load(f) or {}
        self.records = [dict(r) for r in data.get('constants', [])]
        self.path = Path(path)
        logger.debug(f"从 {path} 加载 {len(self.records)} 个常数")

    def save(self, path: Optional[str] = None):
        """写回 YAML 文件"""
        target = Path(path) if path else self.path
        if target is None:
            raise ValueError("未指定常数文件路径")
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, 'w', encoding='utf-8') as f:
            yaml.dump({'constants': self.records}, f, allow_unicode=True, sort_keys=False)

    def _index(self, name: str, alpha: float, delta: float, M0: float) -> Optional[int]:
        for i, r in enumerate(self.records):
            if r['name'] == name and _same(r['alpha'], alpha) and _same(r['delta'], delta) and _same(r['M0'], M0):
                return i
        return None

    def get(self, name: str, alpha: float, delta: float, M0: float) -> Optional[float]:
        """查找常数，不存在时返回 None"""
        i = self._index(name, alpha, delta, M0)
        return None if i is None else float(self.records[i]['value'])

    def put(self, record: Dict[str, Any]):
        """写入或替换一条记录（按 name, alpha, delta, M0 区分）"""
        entry = {
            'name': record['name'],
            'alpha': float(record['alpha']),
            'delta': float(record['delta']),
            'M0': float(record['M0']),
            'value': float(record['value']),
            'version': record.get('version', self.version),
        }
        i = self._index(entry['name'], entry['alpha'], entry['delta'], entry['M0'])
        if i is None:
            self.records.append(entry)
        else:
            self.records[i] = entry

    def __len__(self) -> int:
        return len(self.records)
