# -*- coding: utf-8 -*-
"""日志实例标签与阶段计时测试"""

import logging

from app.core.logging import InstanceFilter, bind_instance, get_logger, setup_logger, stage_timer


def _record() -> logging.LogRecord:
    record = logging.LogRecord('SpSandwich', logging.INFO, __file__, 1, "msg", None, None)
    InstanceFilter().filter(record)
    return record


def test_bind_instance_labels_records():
    assert _record().instance == '-'
    with bind_instance('F2eps', 3):
        assert _record().instance == 'F2eps n=3'
        with bind_instance('commutator'):
            assert _record().instance == 'commutator'
        assert _record().instance == 'F2eps n=3'
    assert _record().instance == '-'


def test_stage_timer_records_even_on_error():
    timings = {}
    with stage_timer('closure', timings):
        pass
    assert timings['closure'] >= 0.0
    try:
        with stage_timer('classify', timings):
            raise ValueError("boom")
    except ValueError:
        pass
    assert 'classify' in timings


def test_setup_logger_writes_instance_to_file(tmp_path):
    logger = setup_logger(log_dir=tmp_path)
    try:
        with bind_instance('F4', 2):
            logger.info("闭包完成")
        for handler in logger.handlers:
            handler.flush()
        text = next(tmp_path.glob("sandwich_*.log")).read_text(encoding='utf-8')
        assert "F4 n=2" in text
        assert "闭包完成" in text
    finally:
        for handler in list(logger.handlers):
            handler.close()
        logger.handlers.clear()
        logger.filters.clear()
        logger.propagate = True
        assert get_logger() is logger
