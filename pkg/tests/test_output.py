"""
测试结果导出模块
"""

import json
import os
import shutil
import sys
import tempfile
import unittest

import pandas as pd

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.output import get_exporter, export_table, CSVExporter, JSONLinesExporter


class TestExporters(unittest.TestCase):
    """测试导出器"""

    def setUp(self):
        self.tmp = tempfile.mkdtemp()
        self.rows = [
            {'alpha': 1.3, 'size': 4, 'count': 2},
            {'alpha': 1.3, 'size': 6, 'count': 5, 'note': '含额外列'},
        ]

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def test_csv_merges_columns(self):
        """测试CSV按首次出现顺序合并各行字段"""
        path = os.path.join(self.tmp, 'rows.csv')
        CSVExporter().export(self.rows, path)
        df = pd.read_csv(path, encoding='utf-8-sig')
        self.assertEqual(list(df.columns), ['alpha', 'size', 'count', 'note'])
        self.assertEqual(len(df), 2)

    def test_csv_empty_writes_nothing(self):
        """测试空结果不写CSV文件"""
        path = os.path.join(self.tmp, 'empty.csv')
        CSVExporter().export([], path)
        self.assertFalse(os.path.exists(path))

    def test_jsonl_append(self):
        """测试JSON Lines追加写入"""
        path = os.path.join(self.tmp, 'rows.jsonl')
        exporter = JSONLinesExporter()
        exporter.export(self.rows[:1], path)
        exporter.export(self.rows[1:], path, append=True)
        with open(path, encoding='utf-8') as f:
            lines = [json.loads(line) for line in f]
        self.assertEqual(len(lines), 2)
        self.assertEqual(lines[1]['note'], '含额外列')

    def test_export_table_formats(self):
        """测试同一张表按多种格式导出"""
        written = export_table(self.rows, self.tmp, 'counts', ['csv', 'json', 'xlsx'])
        self.assertEqual([os.path.basename(p) for p in written], ['counts.csv', 'counts.json', 'counts.xlsx'])
        for path in written:
            self.assertTrue(os.path.exists(path))
        df = pd.read_excel(written[2], engine='openpyxl')
        self.assertEqual(df['count'].tolist(), [2, 5])

    def test_unknown_format(self):
        """测试不支持的格式"""
        with self.assertRaises(ValueError):
            get_exporter('parquet')


if __name__ == '__main__':
    unittest.main()
