#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""日志配置模块

库模块通过 get_logger() 记录日志，从不直接打印。日志记录带有当前实例
(环名与秩) 标签，由 bind_instance() 在命令执行期间设置。
"""

import logging
import time
from contextlib import contextmanager
from contextvars import ContextVar
from datetime import datetime
from pathlib import Path
from typing import Dict, Iterator, Optional

from rich.console import Console
from rich.logging import RichHandler

from app.core.config import LOGS_DIR, ensure_dirs

LOGGER_NAME = 'SpSandwich'

COLORS = {
    'GREEN': "\033[92m",
    'RED': "\033[91m",
    'YELLOW': "\033[93m",
    'BLUE': "\033[94m",
    'CYAN': "\033[96m",
    'RESET': "\033[0m"
}

ICONS = {
    'CHECK': "✓",
    'CROSS': "✗",
    'INFO': "●",
    'SUCCESS': "★",
    'WARNING': "!",
    'COMPONENT': "◆",
    'ARROW': "→",
    'SKIP': "○",
}

_instance: ContextVar[str] = ContextVar('sandwich_instance', default='-')
_shared_console: Optional[Console] = None


def get_console() -> Console:
    """获取共享的 rich Console 实例"""
    global _shared_console
    if _shared_console is None:
        _shared_console = Console()
    return _shared_console


def get_logger() -> logging.Logger:
    """库模块统一使用的日志记录器 (未调用 setup_logger 时不输出)"""
    return logging.getLogger(LOGGER_NAME)


class InstanceFilter(logging.Filter):
    """给记录附加 instance 字段，如 `F2eps n=3`"""

    def filter(self, record: logging.LogRecord) -> bool:
        record.instance = _instance.get()
        return True


@contextmanager
def bind_instance(ring_name: Optional[str], n: Optional[int] = None) -> Iterator[None]:
    label = ring_name or '-'
    if n is not None:
        label = f"{label} n={n}"
    token = _instance.set(label)
    try:
        yield
    finally:
        _instance.reset(token)


@contextmanager
def stage_timer(stage: str, timings: Dict[str, float]) -> Iterator[None]:
    """记录阶段耗时到 timings 并写入日志"""
    started = time.perf_counter()
    try:
        yield
    finally:
        timings[stage] = time.perf_counter() - started
        get_logger().info(f"耗时 {stage}: {timings[stage]:.3f}s")


class QuietRichHandler(RichHandler):
    """可静默的 Rich 日志处理器，进度条运行时抑制控制台输出"""

    def __init__(self, *args, quiet: bool = False, **kwargs):
        super().__init__(*args, **kwargs)
        self.quiet = quiet

    def emit(self, record):
        if not self.quiet:
            super().emit(record)


def set_console_quiet(quiet: bool):
    for handler in get_logger().handlers:
        if isinstance(handler, QuietRichHandler):
            handler.quiet = quiet


def setup_logger(debug: bool = False, log_dir: Optional[Path] = None) -> logging.Logger:
    """设置日志记录器: 按日期命名的文件日志 + rich 控制台

    Args:
        debug: 是否启用调试模式 (BFS 逐层、收集逐深度的细节)
        log_dir: 日志目录，默认 logs/
    """
    logger = get_logger()
    logger.handlers.clear()
    logger.filters.clear()
    logger.setLevel(logging.DEBUG if debug else logging.INFO)
    logger.addFilter(InstanceFilter())

    if log_dir is None:
        ensure_dirs()
        log_dir = LOGS_DIR
    else:
        log_dir.mkdir(parents=True, exist_ok=True)
    log_file = log_dir / f"sandwich_{datetime.now().strftime('%Y%m%d')}.log"
    file_handler = logging.FileHandler(log_file, encoding='utf-8')
    file_handler.setFormatter(logging.Formatter(
        fmt='%(asctime)s │ %(levelname)-8s │ %(instance)s │ %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    ))
    logger.addHandler(file_handler)

    rich_handler = QuietRichHandler(console=get_console(), show_path=False, show_time=True)
    rich_handler.setFormatter(logging.Formatter(fmt='%(message)s'))
    logger.addHandler(rich_handler)

    logger.propagate = False
    return logger
