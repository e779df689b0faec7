#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""环目录解析与加载"""

import re
from itertools import combinations_with_replacement
from pathlib import Path
from typing import Dict, List, Optional

from app.core.config import config
from app.core.errors import CatalogError, SandwichError
from app.core.logging import get_logger
from app.models.ring import Ring, RingSpec
from app.services.ring_core import ring_from_spec

logger = get_logger()

_IDENT = re.compile(r'^[A-Za-z_][A-Za-z0-9_]*$')
_MUL = re.compile(r'^([A-Za-z_][A-Za-z0-9_]*)\s*\*\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.+)$')


def _parse_sum(text: str, spec: RingSpec, line_no: int) -> List[str]:
    terms = [t.strip() for t in text.split('+')]
    if terms == ['0']:
        return []
    for term in terms:
        if term not in spec.basis:
            raise CatalogError(f"未知基元 {term!r} (环 {spec.name})", line_no)
    return terms


def _finish(spec: Optional[RingSpec]):
    if spec is None:
        return
    if not spec.basis:
        raise CatalogError(f"环 {spec.name} 缺少 basis 行", spec.line_no)
    if not spec.unit:
        raise CatalogError(f"环 {spec.name} 缺少 unit 行", spec.line_no)
    for a, b in combinations_with_replacement(spec.basis, 2):
        if (a, b) not in spec.products and (b, a) not in spec.products:
            raise CatalogError(f"环 {spec.name} 缺少乘积 {a}*{b}", spec.line_no)


def parse_catalog(text: str) -> Dict[str, RingSpec]:
    """解析目录文本，格式错误时抛出带行号的 CatalogError"""
    specs: Dict[str, RingSpec] = {}
    current: Optional[RingSpec] = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        keyword, _, rest = line.partition(' ')
        rest = rest.strip()
        if keyword == 'ring':
            _finish(current)
            if not _IDENT.match(rest):
                raise CatalogError(f"无效的环名称 {rest!r}", line_no)
            if rest in specs:
                raise CatalogError(f"环 {rest} 重复定义", line_no)
            current = RingSpec(name=rest, basis=[], unit=[], line_no=line_no)
            specs[rest] = current
            continue
        if current is None:
            raise CatalogError(f"{keyword} 行出现在 ring 行之前", line_no)
        if keyword == 'basis':
            if current.basis:
                raise CatalogError(f"环 {current.name} 的 basis 重复", line_no)
            names = rest.split()
            if not names or any(not _IDENT.match(n) for n in names):
                raise CatalogError(f"无效的基: {rest!r}", line_no)
            if len(set(names)) != len(names):
                raise CatalogError("基元名称重复", line_no)
            current.basis = names
        elif keyword == 'unit':
            if not current.basis:
                raise CatalogError("unit 行必须在 basis 之后", line_no)
            current.unit = _parse_sum(rest.replace(' ', ''), current, line_no)
            if not current.unit:
                raise CatalogError("单位元不能为 0", line_no)
        elif keyword == 'mul':
            if not current.basis:
                raise CatalogError("mul 行必须在 basis 之后", line_no)
            match = _MUL.match(rest)
            if not match:
                raise CatalogError(f"无效的乘法行: {rest!r}", line_no)
            a, b, rhs = match.groups()
            for name in (a, b):
                if name not in current.basis:
                    raise CatalogError(f"未知基元 {name!r} (环 {current.name})", line_no)
            if (a, b) in current.products or (b, a) in current.products:
                raise CatalogError(f"乘积 {a}*{b} 重复定义", line_no)
            current.products[(a, b)] = _parse_sum(rhs.replace(' ', ''), current, line_no)
        else:
            raise CatalogError(f"未知关键字 {keyword!r}", line_no)
    _finish(current)
    return specs


class RingCatalog:
    """环目录: 记录按名称索引，Ring 对象按需构造并缓存"""

    def __init__(self, specs: Dict[str, RingSpec], source: str = '<memory>'):
        self.specs = specs
        self.source = source
        self._rings: Dict[str, Ring] = {}

    def names(self) -> List[str]:
        return list(self.specs)

    def __contains__(self, name: str) -> bool:
        return name in self.specs

    def ring(self, name: str) -> Ring:
        if name not in self.specs:
            raise CatalogError(f"目录 {self.source} 中没有环 {name!r}，可用: {', '.join(self.specs)}")
        if name not in self._rings:
            self._rings[name] = ring_from_spec(self.specs[name])
        return self._rings[name]


def load_catalog(path: Optional[Path] = None) -> RingCatalog:
    """加载环目录 (缺省路径见配置与 SANDWICH_CATALOG 环境变量)"""
    path = Path(path) if path else config.catalog_path
    if not path.exists():
        raise CatalogError(f"找不到环目录文件: {path}")
    try:
        specs = parse_catalog(path.read_text(encoding='utf-8'))
    except SandwichError:
        raise
    except Exception as e:
        raise CatalogError(f"读取环目录失败: {e}")
    logger.debug(f"加载环目录 {path}: {len(specs)} 个环")
    return RingCatalog(specs, source=str(path))
