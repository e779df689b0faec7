# -*- coding: utf-8 -*-
"""中断信号处理测试"""

import signal

import pytest

from app.core.shutdown import bfs_section, check_interrupt, handle_signal, shutdown_event
from app.models.report import SubgroupInput
from app.services.sandwich import harvest_levels


@pytest.fixture(autouse=True)
def clear_event():
    shutdown_event.clear()
    yield
    shutdown_event.clear()


def test_signal_outside_bfs_raises():
    with pytest.raises(KeyboardInterrupt):
        handle_signal(signal.SIGINT, None)
    assert shutdown_event.is_set()


def test_first_signal_in_bfs_only_sets_event():
    with bfs_section():
        handle_signal(signal.SIGINT, None)
        assert shutdown_event.is_set()
        with pytest.raises(KeyboardInterrupt):
            handle_signal(signal.SIGINT, None)


def test_check_interrupt():
    check_interrupt()
    shutdown_event.set()
    with pytest.raises(KeyboardInterrupt):
        check_interrupt()


def test_harvest_stops_on_interrupt(F2eps, prime):
    shutdown_event.set()
    with pytest.raises(KeyboardInterrupt):
        harvest_levels(SubgroupInput(F2eps, prime(F2eps), 3, []), depth=2)
