#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""工具函数模块"""

from .display import print_banner, print_section, print_checks, COLORS, ICONS
from .report_writer import write_report, read_report
