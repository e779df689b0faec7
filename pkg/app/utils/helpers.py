#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""辅助工具函数: 生成元描述解析、配置摘要"""

import hashlib
import json
import re
from typing import Any, Dict, List, Optional

import numpy as np

from app.core.config import config
from app.core.errors import UsageError
from app.models.ring import Ring
from app.services.symplectic import SymplecticSpace

_TRANSVECTION = re.compile(r'^T\[\s*(-?\d+)\s*,\s*(-?\d+)\s*\]\s*=\s*(.+)$')


def split_list(text: Optional[str]) -> List[str]:
    """逗号分隔列表，忽略空项"""
    if not text:
        return []
    return [part.strip() for part in text.split(',') if part.strip()]


def parse_elements(ring: Ring, text: Optional[str]) -> List[int]:
    return [ring.parse(part) for part in split_list(text)]


def parse_transvections(spec: str, space: SymplecticSpace) -> np.ndarray:
    """`T[1,2]=eps*T[3,-3]=e` → 从左到右的乘积"""
    g = space.identity.copy()
    for factor in spec.split('*'):
        match = _TRANSVECTION.match(factor.strip())
        if not match:
            raise UsageError(f"无法解析的初等矩阵: {factor!r}，格式为 T[i,j]=<元素>")
        i, j, elt = int(match.group(1)), int(match.group(2)), match.group(3).strip()
        g = space.matmul(g, space.transvection(i, j, space.ring.parse(elt)))
    return g


def parse_matrix(spec: str, space: SymplecticSpace) -> np.ndarray:
    """`M:<行>;<行>...`，每行元素以逗号分隔"""
    rows = [row for row in spec.split(';') if row.strip()]
    if len(rows) != space.m:
        raise UsageError(f"矩阵需要 {space.m} 行，收到 {len(rows)} 行")
    values = []
    for row in rows:
        entries = split_list(row)
        if len(entries) != space.m:
            raise UsageError(f"矩阵每行需要 {space.m} 个元素，收到 {len(entries)} 个")
        values.append([space.ring.parse(x) for x in entries])
    return np.array(values, dtype=np.uint8)


def parse_extra(spec: str, space: SymplecticSpace, rng: np.random.Generator,
                random_gens: Optional[List[np.ndarray]] = None) -> np.ndarray:
    """额外生成元描述: 初等矩阵乘积、显式矩阵或 random[:长度]"""
    spec = spec.strip()
    if spec.startswith('M:'):
        return parse_matrix(spec[2:], space)
    if spec == 'random' or spec.startswith('random:'):
        length = config.random_word_length
        if ':' in spec:
            try:
                length = int(spec.split(':', 1)[1])
            except ValueError:
                raise UsageError(f"随机长度必须是整数: {spec!r}")
        if not random_gens:
            raise UsageError("random 生成元需要 Sp_2n(A) 的初等生成元")
        return space.random_element(random_gens, rng, length)
    return parse_transvections(spec, space)


def config_hash(settings: Dict[str, Any]) -> str:
    """配置摘要 (键排序的 JSON 的 SHA-256 前 16 位)"""
    payload = json.dumps(settings, ensure_ascii=False, sort_keys=True, default=str)
    return hashlib.sha256(payload.encode('utf-8')).hexdigest()[:16]
