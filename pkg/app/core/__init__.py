#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""核心配置模块"""

from .config import config, ensure_dirs
from .errors import SandwichError
from .logging import setup_logger
