# -*- coding: utf-8 -*-
"""配置加载测试"""

import pytest

from app.core.config import CATALOG_ENV, DEFAULT_CATALOG, config


@pytest.fixture
def reload_config():
    yield config._load_config
    config._load_config()


def test_partial_file_keeps_defaults(tmp_path, reload_config):
    path = tmp_path / "config.yaml"
    path.write_text("engine:\n  cap: 5000\nverify:\n  seed: 7\n", encoding='utf-8')
    reload_config(path)
    assert config.cap == 5000
    assert config.seed == 7
    assert config.chunk_size == 65536
    assert config.max_depth == 6
    assert config.include_timings is False


def test_missing_file_uses_defaults(tmp_path, reload_config):
    reload_config(tmp_path / "absent.yaml")
    assert config.cap == 2_000_000
    assert config.trials == 1000


def test_override_ignores_none(reload_config):
    config.override('engine', 'cap', None)
    assert config.cap == config.engine['cap']
    config.override('engine', 'cap', 123)
    assert config.cap == 123


def test_catalog_path_from_env(tmp_path, monkeypatch):
    monkeypatch.delenv(CATALOG_ENV, raising=False)
    assert config.catalog_path == DEFAULT_CATALOG
    monkeypatch.setenv(CATALOG_ENV, str(tmp_path / "rings.txt"))
    assert config.catalog_path == tmp_path / "rings.txt"
