"""
结果输出模块
支持多种格式的结果表导出
"""

from .exporter import (
    DataExporter,
    CSVExporter,
    JSONExporter,
    JSONLinesExporter,
    ExcelExporter,
    EXPORTERS,
    get_exporter,
    export_table,
)

__all__ = [
    'DataExporter', 'CSVExporter', 'JSONExporter', 'JSONLinesExporter', 'ExcelExporter',
    'EXPORTERS', 'get_exporter', 'export_table',
]
