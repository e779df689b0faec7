#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""环论核心: 结构常数校验、子环、平方子环与形式参数"""

from itertools import combinations_with_replacement
from typing import Iterable, List, Optional

import numpy as np

from app.core.errors import CapacityError, RingValidationError, UsageError
from app.core.logging import get_logger
from app.models.ring import MAX_DIM, FormParameter, FormRing, Ring, RingElt, RingSpec, Subring

logger = get_logger()


def _ids_to_mask(spec: RingSpec, ids: Iterable[str], where: str) -> int:
    mask = 0
    for token in ids:
        if token == '0':
            continue
        if token not in spec.basis:
            raise RingValidationError(f"{where} 引用了未知基元 {token!r}", ring=spec.name)
        mask ^= 1 << spec.basis.index(token)
    return mask


def ring_from_spec(spec: RingSpec) -> Ring:
    """由目录记录构造环，并穷举校验交换律、结合律和单位元"""
    dim = len(spec.basis)
    if dim > MAX_DIM:
        raise CapacityError(f"环 {spec.name} 的维数 {dim} 超过上限 {MAX_DIM}", dim=dim)
    if len(set(spec.basis)) != dim:
        raise RingValidationError(f"环 {spec.name} 的基元名称重复", ring=spec.name)

    products = [[None] * dim for _ in range(dim)]
    for (a, b), terms in spec.products.items():
        if a not in spec.basis or b not in spec.basis:
            raise RingValidationError(f"乘法表引用了未知基元 {a}*{b}", ring=spec.name)
        i, j = spec.basis.index(a), spec.basis.index(b)
        value = _ids_to_mask(spec, terms, f"{a}*{b}")
        for p, q in ((i, j), (j, i)):
            if products[p][q] is not None and products[p][q] != value:
                raise RingValidationError(
                    f"乘法表不交换: {a}*{b} 与 {b}*{a} 不一致", triple=(a, b), ring=spec.name)
            products[p][q] = value
    for i, j in combinations_with_replacement(range(dim), 2):
        if products[i][j] is None:
            raise RingValidationError(
                f"乘法表缺少 {spec.basis[i]}*{spec.basis[j]}", triple=(spec.basis[i], spec.basis[j]),
                ring=spec.name)

    unit = _ids_to_mask(spec, spec.unit, "unit")
    ring = Ring(spec.name, tuple(spec.basis), unit, tuple(tuple(row) for row in products), spec=spec)

    table = ring.table
    basis = [1 << k for k in range(dim)]
    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                left = table[table[basis[i], basis[j]], basis[k]]
                right = table[basis[i], table[basis[j], basis[k]]]
                if left != right:
                    names = (spec.basis[i], spec.basis[j], spec.basis[k])
                    raise RingValidationError(
                        f"乘法表不满足结合律: ({names[0]}*{names[1]})*{names[2]} ≠ "
                        f"{names[0]}*({names[1]}*{names[2]})", triple=names, ring=spec.name)
    if not np.array_equal(table[unit], np.arange(ring.size, dtype=np.uint8)):
        bad = int(np.nonzero(table[unit] != np.arange(ring.size))[0][0])
        raise RingValidationError(
            f"unit 不是单位元: 1*{ring.format(bad)} ≠ {ring.format(bad)}", triple=('unit', ring.format(bad)),
            ring=spec.name)
    logger.debug(f"环 {spec.name} 校验通过 (维数 {dim}, {ring.size} 个元素)")
    return ring


def add(a: RingElt, b: RingElt) -> RingElt:
    return a + b


def mul(a: RingElt, b: RingElt) -> RingElt:
    return a * b


def _check_members(ring: Ring, values: Iterable[int]) -> List[int]:
    out = []
    for x in values:
        x = int(x)
        if not 0 <= x < ring.size:
            raise UsageError(f"{x} 不是环 {ring.name} 的元素")
        out.append(x)
    return out


def _additive_span(values: np.ndarray) -> np.ndarray:
    """F2-线性张成 (加法闭包)"""
    span = np.array([0], dtype=np.int64)
    for v in np.unique(values):
        if v not in span:
            span = np.union1d(span, span ^ v)
    return span


def whole_ring(ring: Ring) -> Subring:
    return Subring(ring, frozenset(range(ring.size)), name=ring.name)


def subring_generated(ring: Ring, gens: Iterable[int], name: str = '') -> Subring:
    """包含 gens ∪ {0,1} 且对加法、乘法封闭的最小子集 (不动点迭代)"""
    current = np.array(sorted({0, ring.unit, *_check_members(ring, gens)}), dtype=np.int64)
    while True:
        current = _additive_span(current)
        products = ring.table[np.ix_(current, current)].ravel().astype(np.int64)
        grown = np.union1d(current, products)
        if len(grown) == len(current):
            if not name and len(current) == ring.size:
                name = ring.name
            return Subring(ring, frozenset(int(x) for x in current), name=name)
        current = grown


def squares_subring(R: Subring) -> Subring:
    """平方子环 R0；特征 2 下平方映射是环自同态，R0 恰为平方集合"""
    ring = R.parent
    squares = {ring.square(x) for x in R.elements}
    R0 = subring_generated(ring, squares)
    if R0.elements != frozenset(squares):
        raise RingValidationError(f"环 {ring.name} 的平方集合不是子环", ring=ring.name)
    return R0


def squares_identity_holds(R: Subring) -> bool:
    """2ξ = (ξ+1)² − ξ² − 1 在特征 2 下化为 (ξ+1)² = ξ² + 1"""
    ring = R.parent
    return all(ring.square(x ^ ring.unit) == ring.square(x) ^ ring.unit for x in R.elements)


def is_form_parameter(R: Subring, elements: Iterable[int]) -> bool:
    ring = R.parent
    lam = set(int(x) for x in elements)
    if 0 not in lam or not lam <= R.elements:
        return False
    if any((a ^ b) not in lam for a in lam for b in lam):
        return False
    squares = {ring.square(x) for x in R.elements}
    return all(ring.mul(s, x) in lam for s in squares for x in lam)


def form_param_generated(R: Subring, gens: Iterable[int]) -> FormParameter:
    """包含 gens ∪ 2R、对加法和 λ ↦ μ²λ 封闭的最小加法子群"""
    ring = R.parent
    gens = _check_members(ring, gens)
    if not set(gens) <= R.elements:
        raise UsageError("形式参数生成元必须属于 R", ring=ring.name)
    squares = np.array(sorted({ring.square(x) for x in R.elements}), dtype=np.int64)
    current = np.array(sorted({0, *gens}), dtype=np.int64)
    while True:
        current = _additive_span(current)
        scaled = ring.table[np.ix_(squares, current)].ravel().astype(np.int64)
        grown = np.union1d(current, scaled)
        if len(grown) == len(current):
            return FormParameter(R, frozenset(int(x) for x in current))
        current = grown


def _sort_key(elements) -> tuple:
    return (len(elements), tuple(sorted(elements)))


def _guard(ring: Ring):
    if ring.dim > MAX_DIM:
        raise CapacityError(f"环 {ring.name} 维数 {ring.dim} 超过枚举上限 {MAX_DIM}")


def enumerate_subrings(A: Ring) -> List[Subring]:
    """A 的全部子环: 从素子环出发逐个添加元素生成"""
    _guard(A)
    prime = subring_generated(A, [])
    found = {prime.elements: prime}
    frontier = [prime]
    while frontier:
        next_frontier = []
        for S in frontier:
            for x in A.elements():
                if x in S.elements:
                    continue
                T = subring_generated(A, set(S.elements) | {x})
                if T.elements not in found:
                    found[T.elements] = T
                    next_frontier.append(T)
        frontier = next_frontier
    return sorted(found.values(), key=lambda s: _sort_key(s.elements))


def enumerate_form_params(R: Subring) -> List[FormParameter]:
    """R 中全部形式参数，按 (大小, 元素) 排序"""
    _guard(R.parent)
    zero = form_param_generated(R, [])
    found = {zero.elements: zero}
    frontier = [zero]
    while frontier:
        next_frontier = []
        for lam in frontier:
            for x in sorted(R.elements):
                if x in lam.elements:
                    continue
                grown = form_param_generated(R, set(lam.elements) | {x})
                if grown.elements not in found:
                    found[grown.elements] = grown
                    next_frontier.append(grown)
        frontier = next_frontier
    return sorted(found.values(), key=lambda p: _sort_key(p.elements))


def enumerate_form_rings(A: Ring, K: Optional[Subring] = None) -> List[FormRing]:
    """满足 K ⊆ Λ ⊆ R ⊆ A 的全部形式环 (K 缺省时不作限制)"""
    rings = []
    for R in enumerate_subrings(A):
        if K is not None and not K.elements <= R.elements:
            continue
        for lam in enumerate_form_params(R):
            if K is not None and not K.elements <= lam.elements:
                continue
            rings.append(FormRing(R, lam, K))
    return rings


def make_form_ring(A: Ring, r_gens: Iterable[int] = (), lambda_gens: Iterable[int] = (),
                   k_gens: Optional[Iterable[int]] = None) -> FormRing:
    """按生成元构造形式环: K = ⟨k_gens⟩, R = ⟨K ∪ r_gens⟩, Λ = ⟨K ∪ lambda_gens⟩"""
    K = subring_generated(A, k_gens or [])
    R = subring_generated(A, set(K.elements) | set(r_gens))
    lam = form_param_generated(R, set(K.elements) | set(lambda_gens))
    return FormRing(R, lam, K)
