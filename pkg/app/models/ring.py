#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""有限交换 F2-代数数据模型

环元素以整数位掩码表示: 第 k 位是第 k 个基向量的系数。加法即按位异或，
乘法查 numpy 乘法表。
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple

import numpy as np

from app.core.errors import CapacityError, UsageError

MAX_DIM = 8


def _multiplication_table(dim: int, basis_products: Tuple[Tuple[int, ...], ...]) -> np.ndarray:
    """由基元乘积按双线性扩展出完整乘法表"""
    size = 1 << dim
    rows = np.zeros((dim, size), dtype=np.uint8)
    for i in range(dim):
        for b in range(1, size):
            low = (b & -b).bit_length() - 1
            rows[i, b] = rows[i, b & (b - 1)] ^ basis_products[i][low]
    table = np.zeros((size, size), dtype=np.uint8)
    for a in range(1, size):
        low = (a & -a).bit_length() - 1
        table[a] = table[a & (a - 1)] ^ rows[low]
    return table


@dataclass
class RingSpec:
    """环目录中的一条记录"""
    name: str
    basis: List[str]
    unit: List[str]
    products: Dict[Tuple[str, str], List[str]] = field(default_factory=dict)
    line_no: int = 0

    def to_dict(self) -> dict:
        return {
            'name': self.name,
            'basis': list(self.basis),
            'unit': list(self.unit),
            'products': [
                [a, b, list(terms)] for (a, b), terms in sorted(self.products.items())
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'RingSpec':
        products = {(a, b): list(terms) for a, b, terms in data.get('products', [])}
        return cls(name=data['name'], basis=list(data['basis']), unit=list(data['unit']), products=products)


class Ring:
    """由 F2-基和乘法表给出的有限交换代数"""

    def __init__(self, name: str, basis_names: Tuple[str, ...], unit: int,
                 basis_products: Tuple[Tuple[int, ...], ...], spec: Optional[RingSpec] = None):
        dim = len(basis_names)
        if dim == 0:
            raise UsageError("环的基不能为空", ring=name)
        if dim > MAX_DIM:
            raise CapacityError(f"环 {name} 的维数 {dim} 超过上限 {MAX_DIM}", dim=dim)
        self.name = name
        self.basis_names = tuple(basis_names)
        self.dim = dim
        self.size = 1 << dim
        self.unit = unit
        self.basis_products = tuple(tuple(row) for row in basis_products)
        self.spec = spec
        self.table = _multiplication_table(dim, self.basis_products)
        self.squares = self.table[np.arange(self.size), np.arange(self.size)].copy()

    def __repr__(self) -> str:
        return f"Ring({self.name}, dim={self.dim})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ring):
            return NotImplemented
        return (self.name == other.name and self.basis_names == other.basis_names
                and self.unit == other.unit and self.basis_products == other.basis_products)

    def __hash__(self) -> int:
        return hash((self.name, self.basis_names, self.unit, self.basis_products))

    def elements(self) -> range:
        return range(self.size)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    def square(self, a: int) -> int:
        return int(self.squares[a])

    def coords(self, x: int) -> Tuple[int, ...]:
        return tuple((x >> k) & 1 for k in range(self.dim))

    def from_coords(self, coords) -> int:
        if len(coords) != self.dim:
            raise UsageError(f"坐标长度 {len(coords)} 与环 {self.name} 的维数 {self.dim} 不符")
        return sum((int(c) & 1) << k for k, c in enumerate(coords))

    def bits(self, x: int) -> str:
        """基坐标顺序的位串，报告格式使用"""
        return ''.join(str(c) for c in self.coords(x))

    def from_bits(self, text: str) -> int:
        if len(text) != self.dim or set(text) - {'0', '1'}:
            raise UsageError(f"无效的坐标位串: {text!r}", ring=self.name)
        return self.from_coords([int(c) for c in text])

    def format(self, x: int) -> str:
        if x == 0:
            return '0'
        if x == self.unit:
            return '1'
        return '+'.join(name for k, name in enumerate(self.basis_names) if (x >> k) & 1)

    def parse(self, text: str) -> int:
        """解析 `e+eps`、`0`、`1` 形式的元素"""
        text = text.strip()
        if text in ('', '0'):
            return 0
        value = 0
        for token in text.split('+'):
            token = token.strip()
            if token == '1':
                value ^= self.unit
            elif token in self.basis_names:
                value ^= 1 << self.basis_names.index(token)
            else:
                raise UsageError(f"环 {self.name} 中没有基元 {token!r}", ring=self.name)
        return value

    def elt(self, x) -> 'RingElt':
        if isinstance(x, str):
            x = self.parse(x)
        if not 0 <= int(x) < self.size:
            raise UsageError(f"{x} 不是环 {self.name} 的元素")
        return RingElt(self, int(x))


@dataclass(frozen=True)
class RingElt:
    """带父环的环元素，运算时检查父环一致"""
    ring: Ring
    value: int

    def _check(self, other: 'RingElt'):
        if not isinstance(other, RingElt) or other.ring != self.ring:
            raise UsageError("环元素来自不同的环", left=self.ring, right=getattr(other, 'ring', other))

    def __add__(self, other: 'RingElt') -> 'RingElt':
        self._check(other)
        return RingElt(self.ring, self.value ^ other.value)

    __sub__ = __add__

    def __mul__(self, other: 'RingElt') -> 'RingElt':
        self._check(other)
        return RingElt(self.ring, self.ring.mul(self.value, other.value))

    @property
    def coords(self) -> Tuple[int, ...]:
        return self.ring.coords(self.value)

    def __str__(self) -> str:
        return self.ring.format(self.value)


@dataclass(frozen=True)
class Subring:
    """环 A 的子环，显式存储全部元素"""
    parent: Ring
    elements: FrozenSet[int]
    name: str = field(default='', compare=False)

    def __contains__(self, x: int) -> bool:
        return x in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.elements))

    def nonzero(self) -> Tuple[int, ...]:
        return tuple(x for x in sorted(self.elements) if x)

    def mask(self) -> np.ndarray:
        """长度 |A| 的布尔数组，用于批量判断矩阵元素是否落在子环中"""
        flags = np.zeros(self.parent.size, dtype=bool)
        flags[list(self.elements)] = True
        return flags

    def label(self) -> str:
        if self.name:
            return self.name
        return '{' + ', '.join(self.parent.format(x) for x in sorted(self.elements)) + '}'

    def to_dict(self) -> dict:
        return {'label': self.label(), 'elements': [self.parent.bits(x) for x in sorted(self.elements)]}


@dataclass(frozen=True)
class FormParameter:
    """子环 R 中的形式参数 Λ"""
    ring: Subring
    elements: FrozenSet[int]

    def __contains__(self, x: int) -> bool:
        return x in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.elements))

    def nonzero(self) -> Tuple[int, ...]:
        return tuple(x for x in sorted(self.elements) if x)

    def mask(self) -> np.ndarray:
        flags = np.zeros(self.ring.parent.size, dtype=bool)
        flags[list(self.elements)] = True
        return flags

    def label(self) -> str:
        fmt = self.ring.parent.format
        return '{' + ', '.join(fmt(x) for x in sorted(self.elements)) + '}'

    def to_dict(self) -> dict:
        bits = self.ring.parent.bits
        return {'label': self.label(), 'elements': [bits(x) for x in sorted(self.elements)]}


@dataclass(frozen=True)
class FormRing:
    """形式环 (R, Λ)，可附带基环 K ⊆ Λ"""
    R: Subring
    lam: FormParameter
    K: Optional[Subring] = field(default=None, compare=False)

    def __post_init__(self):
        if self.lam.ring != self.R:
            raise UsageError("形式参数不属于该子环")
        if not self.lam.elements <= self.R.elements:
            raise UsageError("形式参数必须包含于 R")
        if self.K is not None and not self.K.elements <= self.lam.elements:
            raise UsageError("基环 K 必须包含于 Λ")

    @property
    def ambient(self) -> Ring:
        return self.R.parent

    @property
    def has_unit_param(self) -> bool:
        return self.ambient.unit in self.lam.elements

    def label(self) -> str:
        return f"({self.R.label()}, {self.lam.label()})"

    def to_dict(self) -> dict:
        return {'R': self.R.to_dict(), 'Lambda': self.lam.to_dict()}
