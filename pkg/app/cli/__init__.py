#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""CLI命令模块"""

from .commands import cmd_classify, cmd_closure, cmd_recheck, cmd_ring, cmd_verify
