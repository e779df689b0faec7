#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""数据模型模块"""

from .ring import FormParameter, FormRing, Ring, RingElt, RingSpec, Subring
from .group import GroupClosure, Move, Word
from .report import CheckResult, Harvest, SandwichReport, SubgroupInput
