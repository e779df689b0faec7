#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""业务服务模块"""

from .catalog import RingCatalog, load_catalog
from .sandwich import classify
from .theorems import run_suite
