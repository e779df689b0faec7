#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""显示工具函数"""

from contextlib import contextmanager
from typing import Callable, Iterable, Iterator, Optional

from rich.progress import BarColumn, Progress, SpinnerColumn, TextColumn, TimeElapsedColumn
from rich.table import Table

from app import __version__
from app.core.logging import COLORS, ICONS, get_console, set_console_quiet
from app.models.report import CHECK_FAIL, CHECK_PASS, CheckResult

STATUS_STYLE = {
    CHECK_PASS: ('green', ICONS['CHECK']),
    CHECK_FAIL: ('red', ICONS['CROSS']),
}


def print_banner():
    """打印程序横幅"""
    banner = f"""
{COLORS['BLUE']}{'─' * 60}{COLORS['RESET']}
{COLORS['GREEN']}    SYMPLECTIC SANDWICH CLASSIFIER v{__version__}{COLORS['RESET']}
{COLORS['YELLOW']}    Sp_2n(R, Λ) over finite F2-algebras{COLORS['RESET']}
{COLORS['BLUE']}{'─' * 60}{COLORS['RESET']}
"""
    print(banner)


def print_section(title: str, ring_name: Optional[str] = None, n: Optional[int] = None):
    """分节标题，带上当前实例 (环与秩)"""
    label = f"[bold cyan]{title}[/]"
    if ring_name:
        label += f" [dim]{ring_name}" + (f", n = {n}" if n is not None else "") + "[/]"
    get_console().rule(label, style="blue")


def print_checks(results: Iterable[CheckResult], title: str = "校验结果"):
    table = Table(title=title, show_lines=False)
    table.add_column("状态", justify="center")
    table.add_column("校验")
    table.add_column("说明")
    for r in results:
        style, icon = STATUS_STYLE.get(r.status, ('yellow', ICONS['SKIP']))
        table.add_row(f"[{style}]{icon} {r.status}[/]", r.name, r.detail)
    get_console().print(table)


def print_summary(passed: int, failed: int, skipped: int):
    print(f"{ICONS['CHECK']} 通过: {COLORS['GREEN']}{passed}{COLORS['RESET']} 项")
    print(f"{ICONS['CROSS']} 失败: {COLORS['RED']}{failed}{COLORS['RESET']} 项")
    print(f"{ICONS['SKIP']} 跳过: {COLORS['YELLOW']}{skipped}{COLORS['RESET']} 项")


@contextmanager
def closure_progress(description: str, enabled: bool = True) -> Iterator[Optional[Callable[[int, int], None]]]:
    """BFS 进度条；回调参数为 (层数, 累计元素数)，运行期间静默控制台日志"""
    if not enabled:
        yield None
        return
    console = get_console()
    set_console_quiet(True)
    try:
        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            BarColumn(bar_width=30),
            TextColumn("{task.fields[layer]} 层 / {task.fields[elements]:,} 个元素"),
            TimeElapsedColumn(),
            console=console,
            refresh_per_second=4,
            transient=True,
        ) as progress:
            task = progress.add_task(f"[cyan]{description}", total=None, layer=0, elements=0)

            def update(layer: int, total: int):
                progress.update(task, layer=layer, elements=total)

            yield update
    finally:
        set_console_quiet(False)
