#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""全局中断信号模块

BFS 运行期间第一次 SIGINT/SIGTERM 只置位 shutdown_event，BFS 在层之间检查后
以 interrupted 状态返回已枚举部分；BFS 之外或第二次信号直接抛出 KeyboardInterrupt。
长循环 (水平收集、唯一性判定、校验套件) 通过 check_interrupt() 响应已置位的事件。
"""

import signal
from contextlib import contextmanager
from threading import Event
from typing import Iterator

shutdown_event = Event()
_bfs_depth = 0


@contextmanager
def bfs_section() -> Iterator[None]:
    """标记 BFS 正在运行，期间首次中断改为协作式停止"""
    global _bfs_depth
    _bfs_depth += 1
    try:
        yield
    finally:
        _bfs_depth -= 1


def handle_signal(signum, frame):
    if _bfs_depth > 0 and not shutdown_event.is_set():
        shutdown_event.set()
        return
    shutdown_event.set()
    raise KeyboardInterrupt


def check_interrupt():
    """事件已置位时抛出 KeyboardInterrupt"""
    if shutdown_event.is_set():
        raise KeyboardInterrupt


def install_signal_handlers():
    """安装 SIGINT/SIGTERM 处理器"""
    signal.signal(signal.SIGINT, handle_signal)
    signal.signal(signal.SIGTERM, handle_signal)
    shutdown_event.clear()
