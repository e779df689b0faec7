#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""配置管理模块"""

import os
from pathlib import Path
from typing import Dict, Any, List, Optional

import yaml

PROJECT_ROOT = Path(__file__).parent.parent.parent
DATA_DIR = PROJECT_ROOT / "data"
REPORTS_DIR = DATA_DIR / "reports"
CACHE_DIR = DATA_DIR / "cache"
LOGS_DIR = PROJECT_ROOT / "logs"
CONFIG_FILE = PROJECT_ROOT / "config.yaml"
DEFAULT_CATALOG = PROJECT_ROOT / "catalog" / "rings.txt"
CATALOG_ENV = "SANDWICH_CATALOG"


class Config:
    """配置管理器"""

    _instance: Optional['Config'] = None
    _config: Dict[str, Any] = {}

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._load_config()
        return cls._instance

    def _load_config(self, path: Path = CONFIG_FILE):
        """加载配置文件，文件中的各节覆盖默认值 (未出现的键保留默认)"""
        self._config = self._get_default_config()
        if not path.exists():
            return
        with open(path, 'r', encoding='utf-8') as f:
            loaded = yaml.safe_load(f) or {}
        for section, values in loaded.items():
            if isinstance(values, dict) and isinstance(self._config.get(section), dict):
                self._config[section].update(values)
            else:
                self._config[section] = values

    def _get_default_config(self) -> Dict[str, Any]:
        """获取默认配置"""
        return {
            'engine': {
                'cap': 2_000_000,
                'chunk_size': 65536,
                'max_workers': 4,
            },
            'harvest': {
                'depth': 3,
                'max_depth': 6,
                'layer_budget': 400,
                'p1_pool': 24,
                'p1_bases': 8,
            },
            'verify': {
                'seed': 20240229,
                'trials': 1000,
                'classify_trials': 100,
                'pair_samples': 10000,
                'full_sweep_limit': 1000,
                'random_word_length': 40,
                'classify_word_length': 3,
            },
            'uniqueness': {
                'max_ring_size': 16,
            },
            'report': {
                'schema_version': 1,
                'include_timings': False,
            },
            'catalog': {
                'path': None,
            },
        }

    def as_dict(self) -> Dict[str, Any]:
        return dict(self._config)

    def override(self, section: str, key: str, value: Any):
        """命令行参数覆盖配置项"""
        if value is not None:
            self._config.setdefault(section, {})[key] = value

    @property
    def engine(self) -> Dict[str, Any]:
        return self._config.get('engine', {})

    @property
    def harvest(self) -> Dict[str, Any]:
        return self._config.get('harvest', {})

    @property
    def verify(self) -> Dict[str, Any]:
        return self._config.get('verify', {})

    @property
    def uniqueness(self) -> Dict[str, Any]:
        return self._config.get('uniqueness', {})

    @property
    def report(self) -> Dict[str, Any]:
        return self._config.get('report', {})

    @property
    def cap(self) -> int:
        return self.engine.get('cap', 2_000_000)

    @property
    def chunk_size(self) -> int:
        return self.engine.get('chunk_size', 65536)

    @property
    def max_workers(self) -> int:
        return self.engine.get('max_workers', 4)

    @property
    def harvest_depth(self) -> int:
        return self.harvest.get('depth', 3)

    @property
    def max_depth(self) -> int:
        return self.harvest.get('max_depth', 6)

    @property
    def layer_budget(self) -> int:
        return self.harvest.get('layer_budget', 400)

    @property
    def p1_pool(self) -> int:
        return self.harvest.get('p1_pool', 24)

    @property
    def p1_bases(self) -> int:
        return self.harvest.get('p1_bases', 8)

    @property
    def seed(self) -> int:
        return self.verify.get('seed', 20240229)

    @property
    def trials(self) -> int:
        return self.verify.get('trials', 1000)

    @property
    def classify_trials(self) -> int:
        return self.verify.get('classify_trials', 100)

    @property
    def pair_samples(self) -> int:
        return self.verify.get('pair_samples', 10000)

    @property
    def full_sweep_limit(self) -> int:
        return self.verify.get('full_sweep_limit', 1000)

    @property
    def classify_word_length(self) -> int:
        return self.verify.get('classify_word_length', 3)

    @property
    def random_word_length(self) -> int:
        return self.verify.get('random_word_length', 40)

    @property
    def theorem2_instances(self) -> List[Dict[str, Any]]:
        return self.verify.get('theorem2_instances', [
            {'ambient': 'F2eps', 'r_gens': [], 'lambda_gens': []},
            {'ambient': 'F4', 'r_gens': [], 'lambda_gens': []},
            {'ambient': 'F2eps', 'r_gens': ['eps'], 'lambda_gens': []},
        ])

    @property
    def commutator_rings(self) -> List[str]:
        return self.verify.get('commutator_rings', ['F2', 'F2eps'])

    @property
    def membership_rings(self) -> List[str]:
        return self.verify.get('membership_rings', ['F2', 'F2eps', 'F4'])

    @property
    def max_ring_size(self) -> int:
        return self.uniqueness.get('max_ring_size', 16)

    @property
    def schema_version(self) -> int:
        return self.report.get('schema_version', 1)

    @property
    def include_timings(self) -> bool:
        return self.report.get('include_timings', False)

    @property
    def catalog_path(self) -> Path:
        """环目录路径: 环境变量优先，其次配置文件，最后内置目录"""
        env_path = os.environ.get(CATALOG_ENV)
        if env_path:
            return Path(env_path)
        configured = self._config.get('catalog', {}).get('path')
        if configured:
            path = Path(configured)
            return path if path.is_absolute() else PROJECT_ROOT / path
        return DEFAULT_CATALOG


config = Config()


def ensure_dirs():
    """确保所有必要的目录都存在"""
    for directory in [DATA_DIR, REPORTS_DIR, CACHE_DIR, LOGS_DIR]:
        directory.mkdir(parents=True, exist_ok=True)
