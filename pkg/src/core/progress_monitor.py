"""
实验进度监控器
跟踪子命令各阶段（网格点、标定长度、穷举批次）的进度并触发事件回调
"""

import logging
import time
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Any, Callable, Dict, List, Optional

logger = logging.getLogger(__name__)


class ProgressEventType(Enum):
    """进度事件类型"""
    STARTED = "started"                    # 任务开始
    PROGRESS = "progress"                  # 进度更新
    STAGE_COMPLETED = "stage_completed"    # 检查阶段完成
    COMPLETED = "completed"                # 任务完成
    ERROR = "error"                        # 错误发生


@dataclass
class ProgressEvent:
    """进度事件"""
    event_type: ProgressEventType
    timestamp: datetime
    task_name: Optional[str] = None
    current: int = 0
    total: int = 0
    percentage: float = 0.0
    message: str = ""
    elapsed_time: float = 0.0  # 秒
    eta: float = 0.0           # 秒
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __str__(self):
        if self.event_type == ProgressEventType.PROGRESS:
            return f"[{self.percentage:.1f}%] {self.message} ({self.current}/{self.total})"
        return f"[{self.event_type.value}] {self.message}"


class ProgressMonitor:
    """
    进度监控器
    跟踪实验进度并触发事件回调
    """

    def __init__(self):
        self.callbacks: List[Callable[[ProgressEvent], None]] = []
        self.start_time: Optional[float] = None
        self.is_running: bool = False
        self.current_task: Optional[str] = None
        self.total_items: int = 0
        self.completed_items: int = 0
        self.history: List[ProgressEvent] = []
        self.max_history: int = 1000

    def add_callback(self, callback: Callable[[ProgressEvent], None]):
        """
        添加事件回调函数

        Args:
            callback: 回调函数，接收ProgressEvent参数
        """
        self.callbacks.append(callback)

    def remove_callback(self, callback: Callable[[ProgressEvent], None]):
        if callback in self.callbacks:
            self.callbacks.remove(callback)

    def _elapsed(self) -> float:
        return time.time() - self.start_time if self.start_time else 0.0

    def _eta(self, completed: int) -> float:
        if completed > 0 and self.total_items > completed:
            return self._elapsed() / completed * (self.total_items - completed)
        return 0.0

    def start(self, total_items: int, task_name: Optional[str] = None):
        """
        开始监控

        Args:
            total_items: 总项目数
            task_name: 任务名
        """
        self.start_time = time.time()
        self.is_running = True
        self.total_items = total_items
        self.completed_items = 0
        self.current_task = task_name
        self._emit_event(ProgressEvent(
            event_type=ProgressEventType.STARTED,
            timestamp=datetime.now(),
            task_name=task_name,
            total=total_items,
            message=f"开始任务: {task_name or '未命名'}, 共 {total_items} 项",
        ))

    def update(self, completed: int, message: str = ""):
        """
        更新进度

        Args:
            completed: 已完成的项目数
            message: 进度消息
        """
        if not self.is_running:
            return
        self.completed_items = completed
        percentage = (completed / self.total_items * 100) if self.total_items > 0 else 0
        self._emit_event(ProgressEvent(
            event_type=ProgressEventType.PROGRESS,
            timestamp=datetime.now(),
            task_name=self.current_task,
            current=completed,
            total=self.total_items,
            percentage=percentage,
            message=message or "运行中...",
            elapsed_time=self._elapsed(),
            eta=self._eta(completed),
        ))

    def stage_completed(self, stage: str, outcome_count: int, failures: int = 0):
        """
        一组检查完成

        Args:
            stage: 阶段名
            outcome_count: 产生的检查结果数
            failures: 其中失败的数量
        """
        self._emit_event(ProgressEvent(
            event_type=ProgressEventType.STAGE_COMPLETED,
            timestamp=datetime.now(),
            task_name=self.current_task,
            message=f"{stage}: {outcome_count} 项检查, {failures} 项失败",
            elapsed_time=self._elapsed(),
            metadata={"stage": stage, "outcomes": outcome_count, "failures": failures},
        ))

    def complete(self, message: str = "任务完成"):
        if not self.is_running:
            return
        self.is_running = False
        self._emit_event(ProgressEvent(
            event_type=ProgressEventType.COMPLETED,
            timestamp=datetime.now(),
            task_name=self.current_task,
            current=self.completed_items,
            total=self.total_items,
            percentage=100.0,
            message=message,
            elapsed_time=self._elapsed(),
        ))

    def error(self, error_message: str, exception: Optional[Exception] = None):
        """
        报告错误

        Args:
            error_message: 错误消息
            exception: 异常对象
        """
        self.is_running = False
        metadata = {}
        if exception:
            metadata["exception_type"] = type(exception).__name__
            metadata["exception_message"] = str(exception)
        self._emit_event(ProgressEvent(
            event_type=ProgressEventType.ERROR,
            timestamp=datetime.now(),
            task_name=self.current_task,
            message=f"错误: {error_message}",
            metadata=metadata,
        ))

    def _emit_event(self, event: ProgressEvent):
        self.history.append(event)
        if len(self.history) > self.max_history:
            self.history = self.history[-self.max_history:]
        for callback in self.callbacks:
            try:
                callback(event)
            except Exception as e:
                # 回调出错不中断实验
                logger.warning(f"进度回调函数出错: {e}")

    def get_current_progress(self) -> Dict[str, Any]:
        """
        获取当前进度状态

        Returns:
            Dict: 当前进度信息
        """
        percentage = (self.completed_items / self.total_items * 100) if self.total_items > 0 else 0
        return {
            "is_running": self.is_running,
            "current_task": self.current_task,
            "completed_items": self.completed_items,
            "total_items": self.total_items,
            "percentage": percentage,
            "elapsed_time": self._elapsed(),
            "eta": self._eta(self.completed_items),
        }

    def get_summary(self) -> str:
        progress = self.get_current_progress()
        lines = [
            "=" * 50,
            "进度摘要",
            "=" * 50,
            f"状态: {'运行中' if progress['is_running'] else '已停止'}",
            f"当前任务: {progress['current_task'] or '无'}",
            f"进度: {progress['completed_items']}/{progress['total_items']} ({progress['percentage']:.1f}%)",
            f"已用时间: {self._format_time(progress['elapsed_time'])}",
        ]
        if progress['is_running'] and progress['eta'] > 0:
            lines.append(f"预计剩余: {self._format_time(progress['eta'])}")
        lines.append("=" * 50)
        return "\n".join(lines)

    def _format_time(self, seconds: float) -> str:
        if seconds < 60:
            return f"{seconds:.1f}秒"
        elif seconds < 3600:
            return f"{seconds / 60:.1f}分钟"
        return f"{seconds / 3600:.1f}小时"


def logging_callback(event: ProgressEvent):
    """
    日志输出回调
    进度事件写入 DEBUG，其余事件写入 INFO
    """
    if event.event_type == ProgressEventType.PROGRESS:
        logger.debug(str(event))
    elif event.event_type == ProgressEventType.ERROR:
        logger.error(str(event))
    else:
        logger.info(str(event))
