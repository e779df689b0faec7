#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""辛群夹层分类工具应用包"""

__version__ = "1.0.0"
