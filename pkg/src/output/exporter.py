"""
结果导出器
支持CSV、JSON、JSON Lines、Excel等格式
"""

import csv
import json
from abc import ABC, abstractmethod
from typing import List, Dict, Any
from pathlib import Path
import pandas as pd


class DataExporter(ABC):
    """结果导出器基类"""

    # 文件扩展名
    suffix = ""

    @abstractmethod
    def export(self, data: List[Dict[str, Any]], file_path: str, **kwargs):
        """
        导出结果行

        Args:
            data: 结果行，每行一个字典
            file_path: 输出文件路径
            **kwargs: 额外参数
        """
        pass


def _fieldnames(data: List[Dict[str, Any]]) -> List[str]:
    # 各行字段可能不同，按首次出现的顺序合并
    names: Dict[str, None] = {}
    for row in data:
        for key in row:
            names.setdefault(key, None)
    return list(names)


class CSVExporter(DataExporter):
    """CSV格式导出器"""

    suffix = ".csv"

    def export(self, data: List[Dict[str, Any]], file_path: str, **kwargs):
        """
        导出为CSV格式

        Args:
            data: 结果行
            file_path: 输出文件路径
            **kwargs: 额外参数（encoding, delimiter等）
        """
        if not data:
            return

        encoding = kwargs.get('encoding', 'utf-8-sig')  # 使用BOM以便Excel正确识别
        delimiter = kwargs.get('delimiter', ',')

        # 确保目录存在
        Path(file_path).parent.mkdir(parents=True, exist_ok=True)

        with open(file_path, 'w', newline='', encoding=encoding) as f:
            writer = csv.DictWriter(f, fieldnames=_fieldnames(data), delimiter=delimiter, lineterminator='\n')
            writer.writeheader()
            writer.writerows(data)


class JSONExporter(DataExporter):
    """JSON格式导出器"""

    suffix = ".json"

    def export(self, data: Any, file_path: str, **kwargs):
        """
        导出为JSON格式

        Args:
            data: 结果行或任意可序列化对象
            file_path: 输出文件路径
            **kwargs: 额外参数（indent, ensure_ascii等）
        """
        indent = kwargs.get('indent', 2)
        ensure_ascii = kwargs.get('ensure_ascii', False)

        Path(file_path).parent.mkdir(parents=True, exist_ok=True)

        with open(file_path, 'w', encoding='utf-8') as f:
            json.dump(data, f, indent=indent, ensure_ascii=ensure_ascii, default=str)


class JSONLinesExporter(DataExporter):
    """JSON Lines格式导出器，每行一个对象"""

    suffix = ".jsonl"

    def export(self, data: List[Dict[str, Any]], file_path: str, **kwargs):
        ensure_ascii = kwargs.get('ensure_ascii', False)
        mode = 'a' if kwargs.get('append', False) else 'w'

        Path(file_path).parent.mkdir(parents=True, exist_ok=True)

        with open(file_path, mode, encoding='utf-8') as f:
            for row in data:
                f.write(json.dumps(row, ensure_ascii=ensure_ascii, default=str, sort_keys=False))
                f.write('\n')


class ExcelExporter(DataExporter):
    """Excel格式导出器"""

    suffix = ".xlsx"

    def export(self, data: List[Dict[str, Any]], file_path: str, **kwargs):
        """
        导出为Excel格式

        Args:
            data: 结果行
            file_path: 输出文件路径
            **kwargs: 额外参数（sheet_name等）
        """
        if not data:
            return

        sheet_name = kwargs.get('sheet_name', 'results')

        Path(file_path).parent.mkdir(parents=True, exist_ok=True)

        df = pd.DataFrame(data, columns=_fieldnames(data))
        df.to_excel(file_path, sheet_name=sheet_name, index=False, engine='openpyxl')


EXPORTERS = {
    'csv': CSVExporter,
    'json': JSONExporter,
    'jsonl': JSONLinesExporter,
    'xlsx': ExcelExporter,
}


def get_exporter(fmt: str) -> DataExporter:
    """
    按格式名取导出器

    Raises:
        ValueError: 不支持的格式
    """
    try:
        return EXPORTERS[fmt]()
    except KeyError:
        raise ValueError(f"不支持的导出格式: {fmt}") from None


def export_table(data: List[Dict[str, Any]], out_dir: str, stem: str, formats: List[str], **kwargs) -> List[str]:
    """
    以多种格式导出同一张结果表

    Returns:
        List[str]: 写出的文件路径
    """
    written = []
    for fmt in formats:
        exporter = get_exporter(fmt)
        path = str(Path(out_dir) / f"{stem}{exporter.suffix}")
        exporter.export(data, path, **kwargs)
        written.append(path)
    return written
