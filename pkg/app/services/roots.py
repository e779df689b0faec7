#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""C_n 根系与指标集 I = (1, ..., n, -n, ..., -1)"""

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Tuple

from app.core.errors import UnsupportedError, UsageError


def index_order(n: int) -> Tuple[int, ...]:
    return tuple(range(1, n + 1)) + tuple(range(-n, 0))


def check_index(k: int, n: int):
    if k == 0 or abs(k) > n:
        raise UsageError(f"指标 {k} 不在 I = (±1, ..., ±{n}) 中")


def position(k: int, n: int) -> int:
    """指标 k 的存储位置: k>0 时为 k-1，k<0 时为 2n-|k|"""
    check_index(k, n)
    return k - 1 if k > 0 else 2 * n + k


def index_at(p: int, n: int) -> int:
    return p + 1 if p < n else p - 2 * n


def succ(k: int, n: int) -> int:
    """I 序中 k 的后继"""
    order = index_order(n)
    at = order.index(k)
    if at + 1 >= len(order):
        raise UsageError(f"指标 {k} 没有后继")
    return order[at + 1]


def _sign(k: int) -> int:
    return 1 if k > 0 else -1


@dataclass(frozen=True)
class Root:
    """以 ε 基坐标表示的根"""
    vector: Tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.vector)

    @property
    def is_long(self) -> bool:
        return any(abs(c) == 2 for c in self.vector)

    @property
    def kind(self) -> str:
        return 'long' if self.is_long else 'short'

    def __neg__(self) -> 'Root':
        return Root(tuple(-c for c in self.vector))

    def plus(self, other: 'Root', times: int = 1) -> Tuple[int, ...]:
        return tuple(a + times * b for a, b in zip(self.vector, other.vector))

    def inner(self, other: 'Root') -> int:
        return sum(a * b for a, b in zip(self.vector, other.vector))

    def label(self) -> str:
        parts = []
        for k, c in enumerate(self.vector, start=1):
            if c == 0:
                continue
            sign = '-' if c < 0 else ('+' if parts else '')
            coeff = '2' if abs(c) == 2 else ''
            parts.append(f"{sign}{coeff}e{k}")
        return ''.join(parts)

    def __str__(self) -> str:
        return self.label()


def root_of_position(i: int, j: int, n: int) -> Root:
    """映射 p: 非对角位置 (i,j) ↦ sgn(i)ε_|i| − sgn(j)ε_|j|"""
    check_index(i, n)
    check_index(j, n)
    if i == j:
        raise UsageError(f"对角位置 ({i},{j}) 不对应任何根")
    vector = [0] * n
    vector[abs(i) - 1] += _sign(i)
    vector[abs(j) - 1] -= _sign(j)
    return Root(tuple(vector))


def mirror(i: int, j: int) -> Tuple[int, int]:
    return -j, -i


def root_position(alpha: Root) -> Tuple[int, int]:
    """根在 p 下的代表位置 (i,j)"""
    nonzero = [(k + 1, c) for k, c in enumerate(alpha.vector) if c]
    if len(nonzero) == 1 and abs(nonzero[0][1]) == 2:
        k, c = nonzero[0]
        s = _sign(c)
        return s * k, -s * k
    if len(nonzero) == 2 and all(abs(c) == 1 for _, c in nonzero):
        (p, a), (q, b) = nonzero
        return a * p, -b * q
    raise UsageError(f"{alpha.vector} 不是 C_n 的根")


def fiber(alpha: Root) -> List[Tuple[int, int]]:
    i, j = root_position(alpha)
    m = mirror(i, j)
    return [(i, j)] if m == (i, j) else [(i, j), m]


@lru_cache(maxsize=None)
def enumerate_roots(n: int) -> Tuple[Root, ...]:
    """全部 2n² 个根，按代表位置在 I 序下首次出现的顺序排列"""
    roots, seen = [], set()
    order = index_order(n)
    for i in order:
        for j in order:
            if i == j:
                continue
            alpha = root_of_position(i, j, n)
            if alpha not in seen:
                seen.add(alpha)
                roots.append(alpha)
    return tuple(roots)


def is_root(vector: Tuple[int, ...]) -> bool:
    return Root(tuple(vector)) in set(enumerate_roots(len(vector)))


def as_root(vector: Tuple[int, ...]) -> Optional[Root]:
    return Root(tuple(vector)) if is_root(vector) else None


def reflect(alpha: Root, beta: Root) -> Root:
    """s_α(β) = β − 2(β,α)/(α,α)·α"""
    coeff = 2 * beta.inner(alpha) // alpha.inner(alpha)
    return Root(beta.plus(alpha, -coeff))


def angle_case(alpha: Root, beta: Root) -> str:
    """交换子公式的分支: commute / 2pi/3 / pi/2 / long-short / short-long"""
    if alpha == beta or alpha == -beta:
        raise UnsupportedError(f"根对 {alpha}, {beta} 满足 α = ±β，没有交换子公式")
    total = as_root(alpha.plus(beta))
    if total is None:
        return 'commute'
    if not alpha.is_long and not beta.is_long:
        return 'pi/2' if total.is_long else '2pi/3'
    return 'long-short' if alpha.is_long else 'short-long'


def parse_root(text: str, n: int) -> Root:
    """解析 `e1-e2`、`2e1`、`-e1-e3` 形式的根"""
    vector = [0] * n
    cleaned = text.replace(' ', '')
    if not cleaned:
        raise UsageError("根不能为空")
    token, sign = '', 1
    terms = []
    for ch in cleaned + '+':
        if ch in '+-' and token:
            terms.append((sign, token))
            token = ''
            sign = 1 if ch == '+' else -1
        elif ch in '+-':
            sign = 1 if ch == '+' else -1
        else:
            token += ch
    for sign, term in terms:
        coeff = 1
        if term.startswith('2'):
            coeff, term = 2, term[1:]
        if not term.startswith('e') or not term[1:].isdigit():
            raise UsageError(f"无效的根: {text!r}")
        k = int(term[1:])
        if not 1 <= k <= n:
            raise UsageError(f"根 {text!r} 的下标超出 1..{n}")
        vector[k - 1] += sign * coeff
    root = as_root(tuple(vector))
    if root is None:
        raise UsageError(f"{text!r} 不是 C_{n} 的根")
    return root
