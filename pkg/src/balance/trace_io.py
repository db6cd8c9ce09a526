"""
平衡轨迹的文本格式

每行一步: level index direction flipped_count
"""

from pathlib import Path
from typing import List, NamedTuple, Union

from .procedure import BalanceTrace, FlipDirection


class TraceRecord(NamedTuple):
    """文本格式中的一行"""
    level: int
    index: int
    direction: FlipDirection
    flipped_count: int


def format_trace(trace: BalanceTrace) -> str:
    """把轨迹格式化为文本，每步一行"""
    lines = [
        f"{step.interval.level} {step.interval.index} {step.direction.value} {len(step.flipped)}"
        for step in trace.steps
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_trace(text: str) -> List[TraceRecord]:
    """
    解析轨迹文本

    Raises:
        ValueError: 行格式不正确
    """
    records = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ValueError(f"第 {lineno} 行应有4个字段: {raw!r}")
        level, index, direction, count = parts
        records.append(TraceRecord(int(level), int(index), FlipDirection(direction), int(count)))
    return records


def write_trace(trace: BalanceTrace, output_path: Union[str, Path]):
    """写出轨迹文本文件"""
    path = Path(output_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_trace(trace), encoding='utf-8')


def read_trace(input_path: Union[str, Path]) -> List[TraceRecord]:
    """读取轨迹文本文件"""
    return parse_trace(Path(input_path).read_text(encoding='utf-8'))


def trace_records(trace: BalanceTrace) -> List[TraceRecord]:
    """由轨迹直接得到记录，便于与文件比较"""
    return [
        TraceRecord(step.interval.level, step.interval.index, step.direction, len(step.flipped))
        for step in trace.steps
    ]
