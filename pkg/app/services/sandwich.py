#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""夹层分类器

对 H = ⟨Ep(K) ∪ extra⟩ ≤ Sp_2n(A) (n ≥ 3) 求出唯一的形式环 (R, Λ)，
使 Ep(R,Λ) ≤ H ≤ N(R,Λ)，并给出两侧证书:
下侧为每个 Ep(R,Λ) 生成元在 H 生成元上的字，上侧为逐生成元的正规化表。

水平元素的收集全部在两个基根上进行: 短根 ε1−ε2、长根 2ε1。
其他根上的元素通过 Weyl 元共轭搬运，搬运字只用到 Ep(K) 的字母。
"""

from collections import Counter, deque
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from app.core.config import config
from app.core.errors import PatternError, RankError, SandwichError, UnsupportedError, UsageError
from app.core.logging import get_logger
from app.core.shutdown import check_interrupt
from app.models.group import Word, commutator_word, conjugate_word, inverse_word, make_word, reduce_word
from app.models.report import (CHECK_FAIL, CHECK_PASS, CHECK_SKIP, STATUS_CERTIFIED, STATUS_INCONCLUSIVE,
                               CheckResult, Harvest, LevelCert, SandwichReport, SubgroupInput)
from app.models.ring import FormParameter, FormRing, Ring, RingSpec, Subring
from app.services.group_engine import closure, evaluate_word
from app.services.ring_core import (enumerate_form_rings, form_param_generated, is_form_parameter, ring_from_spec,
                                    subring_generated, whole_ring)
from app.services.roots import Root, as_root, parse_root, root_of_position, succ
from app.services.symplectic import (SymplecticSpace, bak_mask, ep_generator_labels, ep_generators,
                                     get_space, matrix_from_rows, u1_coordinates, u1_pattern)

logger = get_logger()

UNIQUENESS_VERIFIED = 'verified'
UNIQUENESS_SKIPPED = 'skipped'
UNIQUENESS_VIOLATED = 'violated'

# 唯一性判定中枚举 H 的上限
UNIQUENESS_CLOSURE_CAP = 200_000


def base_roots(n: int) -> Tuple[Root, Root]:
    """(短基根 ε1−ε2, 长基根 2ε1)"""
    return root_of_position(1, 2, n), root_of_position(1, -1, n)


class LetterBook:
    """H 的生成元表: Ep(K) 根元素字母在前，额外生成元在后"""

    def __init__(self, space: SymplecticSpace, K: Subring, extra_gens: Sequence[np.ndarray] = ()):
        if K.parent != space.ring:
            raise UsageError("K 必须是 A 的子环")
        self.space = space
        self.K = K
        self.k_form = FormRing(K, FormParameter(K, K.elements), K)
        self.k_labels = ep_generator_labels(self.k_form, space.n)
        self.generators: List[np.ndarray] = [space.root_element(alpha, xi) for alpha, xi in self.k_labels]
        self.extra_offset = len(self.generators)
        self.generators.extend(np.asarray(g, dtype=np.uint8) for g in extra_gens)
        self._letters = {label: idx for idx, label in enumerate(self.k_labels)}
        self.short_base, self.long_base = base_roots(space.n)
        self._carry: Dict[Root, Word] = {}
        self._carry_mats: Dict[Root, np.ndarray] = {}
        self._build_transport()

    @property
    def extra_indices(self) -> range:
        return range(self.extra_offset, len(self.generators))

    def letter(self, alpha: Root, xi: Optional[int] = None) -> Word:
        xi = self.space.unit if xi is None else xi
        try:
            return ((self._letters[(alpha, xi)], 1),)
        except KeyError:
            raise UsageError(f"x_{alpha}({self.space.ring.format(xi)}) 不是 Ep(K) 的字母")

    def evaluate(self, word: Word) -> np.ndarray:
        return evaluate_word(word, self.generators, self.space)

    def _weyl_word(self, gamma: Root) -> Word:
        return self.letter(gamma) + self.letter(-gamma) + self.letter(gamma)

    def _build_transport(self):
        """BFS 求 u_α，使 u_α·x_α(t)·u_α⁻¹ = x_base(t)，base 为与 α 等长的基根"""
        space = self.space
        weyl = {gamma: (space.weyl_element(gamma), self._weyl_word(gamma)) for gamma in space.roots}
        self._carry = {self.short_base: (), self.long_base: ()}
        queue = deque([self.short_base, self.long_base])
        while queue:
            beta = queue.popleft()
            x = space.root_element(beta, space.unit)
            for gamma, (w_mat, w_word) in weyl.items():
                hit = space.match_root_element(space.conjugate(w_mat, x))
                if hit is None or hit[1] != space.unit:
                    raise SandwichError(f"Weyl 元 w_{gamma} 未把根元素映为根元素")
                delta = hit[0]
                if delta not in self._carry:
                    self._carry[delta] = reduce_word(self._carry[beta] + inverse_word(w_word))
                    queue.append(delta)
        if len(self._carry) != len(space.roots):
            raise SandwichError("Weyl 搬运未覆盖全部根")
        for alpha, word in self._carry.items():
            self._carry_mats[alpha] = self.evaluate(word)

    def base_of(self, alpha: Root) -> Root:
        return self.long_base if alpha.is_long else self.short_base

    def carry_matrix(self, alpha: Root) -> np.ndarray:
        return self._carry_mats[alpha]

    def carry_word(self, alpha: Root) -> Word:
        return self._carry[alpha]

    def transport(self, word: Word, src: Root, dst: Root) -> Word:
        """word 求值为 x_src(t) 时，返回求值为 x_dst(t) 的字"""
        if src == dst:
            return word
        if src.is_long != dst.is_long:
            raise UsageError(f"不能在不等长的根 {src} 与 {dst} 之间搬运")
        v = inverse_word(self._carry[dst]) + self._carry[src]
        return conjugate_word(v, word)


class Harvester:
    """在 H 的生成元上构造字，收集基根水平元素"""

    def __init__(self, book: LetterBook, layer_budget: Optional[int] = None,
                 p1_pool: Optional[int] = None, p1_bases: Optional[int] = None):
        self.book = book
        self.space = book.space
        self.ring = book.space.ring
        self.layer_budget = config.layer_budget if layer_budget is None else layer_budget
        self.p1_pool = config.p1_pool if p1_pool is None else p1_pool
        self.p1_bases = config.p1_bases if p1_bases is None else p1_bases
        self.short: Dict[int, Word] = {0: ()}
        self.long: Dict[int, Word] = {0: ()}
        for xi in book.K.nonzero():
            self.short[xi] = book.letter(book.short_base, xi)
            self.long[xi] = book.letter(book.long_base, xi)
        self.depth_used = -1
        self.p1_hits = 0
        self.rank_skips = 0
        self._frontier: List[Tuple[np.ndarray, Word]] = []
        self._seen: set = set()
        self._factored: set = set()

    # ------------------------------------------------------------------ 记录

    def record(self, alpha: Root, scalar: int, word: Word) -> bool:
        """word 求值为 x_α(scalar)；返回是否为新的水平元素"""
        store = self.long if alpha.is_long else self.short
        if scalar in store:
            return False
        store[scalar] = self.book.transport(reduce_word(word), alpha, self.book.base_of(alpha))
        logger.debug(f"新水平元素 {alpha.kind} {self.ring.format(scalar)}")
        return True

    def word_for(self, alpha: Root, scalar: int) -> Word:
        store = self.long if alpha.is_long else self.short
        return self.book.transport(store[scalar], self.book.base_of(alpha), alpha)

    # ------------------------------------------------------------------ 分析

    def analyze(self, g: np.ndarray, word: Word):
        space = self.space
        if space.is_identity(g):
            return
        hit = space.match_root_element(g)
        if hit is not None:
            self.record(hit[0], hit[1], word)
            return
        if u1_pattern(g, space):
            self.factor_u1(g, word)
            return
        pair = space.match_two_factor(g)
        if pair is not None:
            self._try_uncouple(g, pair[0], pair[1], word)
            return
        for beta in space.roots:
            if not beta.is_long or beta == self.book.long_base:
                continue
            u = self.book.carry_matrix(beta)
            moved = space.conjugate(u, g)
            if u1_pattern(moved, space):
                self.factor_u1(moved, conjugate_word(self.book.carry_word(beta), word))
                return

    def _try_uncouple(self, g: np.ndarray, alpha: Root, beta: Root, word: Word):
        try:
            self.uncouple(g, alpha, beta, word)
        except RankError:
            self.rank_skips += 1

    def uncouple(self, g: np.ndarray, alpha: Root, beta: Root, word: Word) -> Tuple[int, int, Word, Word]:
        """g = x_α(μ)·x_β(λ)，返回 (μ, λ, x_α(μ) 的字, x_β(λ) 的字)"""
        space = self.space
        mu, lam = space.two_factor_scalars(g, alpha, beta)
        if not mu:
            self.record(beta, lam, word)
            return mu, lam, (), word
        if not lam:
            self.record(alpha, mu, word)
            return mu, lam, word, ()
        gamma = _uncoupling_root(alpha, beta, space.roots)
        target = Root(alpha.plus(gamma))
        c_word = commutator_word(word, self.book.letter(gamma))
        c = space.commutator(g, space.root_element(gamma, space.unit))
        if not np.array_equal(c, space.root_element(target, mu)):
            raise PatternError(f"[g, x_{gamma}(1)] 不是 x_{target}(μ)")
        self.record(target, mu, c_word)
        alpha_word = self.book.transport(c_word, target, alpha)
        long_word = reduce_word(inverse_word(alpha_word) + word)
        self.record(beta, lam, long_word)
        return mu, lam, alpha_word, long_word

    def factor_u1(self, g: np.ndarray, word: Word):
        """把 g ∈ U1 分解为 ∏ T_1j(μ_j)，并记录每个坐标

        取支撑中 I 序最小的 h，[T_{h,succ(h)}(1), g] 把 μ_h 移到位置 succ(h)；
        递归处理交换子后剥去 T_1h(μ_h)，再递归处理余下部分。
        """
        space = self.space
        key = g.tobytes()
        if key in self._factored:
            return
        self._factored.add(key)
        coords = u1_coordinates(g, self.ring)
        support = [j for j in space.order if j != 1 and coords[j]]
        if not support:
            return
        if all(coords[j] in self.short for j in support if j != -1) and coords[-1] in self.long:
            return
        n = space.n
        if len(support) == 1:
            j = support[0]
            self.record(root_of_position(1, j, n), coords[j], word)
            return
        if support == [-2, -1]:
            self._try_uncouple(g, root_of_position(1, -2, n), root_of_position(1, -1, n), word)
            return
        h = support[0]
        i = succ(h, n)
        y = space.transvection(h, i, space.unit)
        c = space.commutator(y, g)
        c_word = commutator_word(self.book.letter(root_of_position(h, i, n)), word)
        self.factor_u1(c, c_word)
        alpha = root_of_position(1, h, n)
        mu = coords[h]
        if mu not in self.short:
            # 交换子一侧因秩不足无法拆开
            return
        peel = space.transvection(1, h, mu)
        rest = space.matmul(space.inverse(peel), g)
        rest_word = reduce_word(inverse_word(self.word_for(alpha, mu)) + word)
        self.factor_u1(rest, rest_word)

    # ------------------------------------------------------------------ 候选层

    def _push(self, layer: List[Tuple[np.ndarray, Word]], g: np.ndarray, word: Word) -> bool:
        if self.space.is_identity(g):
            return False
        key = g.tobytes()
        if key in self._seen:
            return False
        self._seen.add(key)
        layer.append((g, word))
        return True

    def _initial_layer(self) -> List[Tuple[np.ndarray, Word]]:
        layer: List[Tuple[np.ndarray, Word]] = []
        for idx in self.book.extra_indices:
            g = self.book.generators[idx]
            self._push(layer, g, ((idx, 1),))
            self._push(layer, self.space.inverse(g), ((idx, -1),))
        return layer

    def _commutator_layer(self, previous) -> List[Tuple[np.ndarray, Word]]:
        space = self.space
        layer: List[Tuple[np.ndarray, Word]] = []
        for g, word in previous:
            for alpha, xi in self.book.k_labels:
                c = space.commutator(g, space.root_element(alpha, xi))
                if self._push(layer, c, commutator_word(word, self.book.letter(alpha, xi))):
                    if len(layer) >= self.layer_budget:
                        return layer
        return layer

    def _p1_word_pool(self) -> List[Word]:
        pool: List[Word] = [()]
        for alpha in self.space.roots:
            if len(pool) >= self.p1_pool:
                break
            pool.append(self.book.letter(alpha))
        return pool

    def search_p1(self, g: np.ndarray, word: Word):
        """P1 搜索: p = H⁻¹·x·H ∈ P1 时，p⁻¹·T_1j(1)·p 落在 U1 中"""
        space = self.space
        n = space.n
        book = self.book
        long_base = book.long_base
        x = space.root_element(long_base, space.unit)
        x_word = book.letter(long_base)
        m = space.m
        for a_word in self._p1_word_pool():
            y = space.matmul(book.evaluate(a_word), g) if a_word else g
            y_word = a_word + word
            y_inv = space.inverse(y)
            for alpha in space.roots:
                if alpha.is_long:
                    continue
                h = space.root_element(alpha, space.unit)
                big_h = space.matmul(space.matmul(y_inv, h), y)
                p = space.matmul(space.matmul(space.inverse(big_h), x), big_h)
                if p[1:, 0].any() or p[m - 1, :m - 1].any():
                    continue
                self.p1_hits += 1
                h_word = conjugate_word(inverse_word(y_word), book.letter(alpha))
                p_word = conjugate_word(inverse_word(h_word), x_word)
                p_inv = space.inverse(p)
                for j in space.order:
                    if j in (1, -1):
                        continue
                    d0 = space.transvection(1, j, space.unit)
                    u = space.matmul(space.matmul(p_inv, d0), p)
                    if space.is_identity(u):
                        continue
                    d0_word = book.letter(root_of_position(1, j, n))
                    self.analyze(u, conjugate_word(inverse_word(p_word), d0_word))

    def deepen(self, depth: int):
        """把候选层推进到 depth (单调: 已收集的水平元素不会丢失)"""
        while self.depth_used < depth:
            check_interrupt()
            if self.depth_used < 0:
                layer = self._initial_layer()
            else:
                layer = self._commutator_layer(self._frontier)
            self.depth_used += 1
            for g, word in layer:
                self.analyze(g, word)
            for g, word in layer[:self.p1_bases]:
                self.search_p1(g, word)
            self._frontier = layer
            self.close_levels()
            logger.debug(f"深度 {self.depth_used}: 候选 {len(layer)}，短水平 {len(self.short)}，"
                         f"长水平 {len(self.long)}")

    # ------------------------------------------------------------------ 水平闭包

    def close_levels(self):
        """按环运算封闭水平集: 短水平对加法和乘法封闭，长水平对加法和 λ ↦ μ²λ 封闭"""
        space = self.space
        n = space.n
        ring = self.ring
        book = self.book
        e12 = book.short_base
        e23 = root_of_position(2, 3, n) if n >= 3 else None
        e13 = root_of_position(1, 3, n) if n >= 3 else None
        e21 = root_of_position(2, 1, n)
        sum_root = root_of_position(1, -2, n)
        long2 = root_of_position(2, -2, n)
        changed = True
        while changed:
            changed = False
            for s, sw in list(self.short.items()):
                for t, tw in list(self.short.items()):
                    if (s ^ t) not in self.short:
                        self.short[s ^ t] = reduce_word(sw + tw)
                        changed = True
                    if e23 is not None and s and t and ring.mul(s, t) not in self.short:
                        c = commutator_word(sw, book.transport(tw, e12, e23))
                        changed |= self.record(e13, ring.mul(s, t), c)
            for a, aw in list(self.long.items()):
                for b, bw in list(self.long.items()):
                    if (a ^ b) not in self.long:
                        self.long[a ^ b] = reduce_word(aw + bw)
                        changed = True
            for lam, lw in list(self.long.items()):
                if not lam:
                    continue
                for mu, mw in list(self.short.items()):
                    if not mu:
                        continue
                    if ring.mul(lam, mu) in self.short and \
                            ring.mul(lam, ring.square(mu)) in self.long:
                        continue
                    if n < 3:
                        self.rank_skips += 1
                        continue
                    g = space.commutator(space.root_element(book.long_base, lam),
                                         space.root_element(e21, mu))
                    word = commutator_word(lw, book.transport(mw, e12, e21))
                    before = (len(self.short), len(self.long))
                    self.uncouple(g, sum_root, long2, word)
                    changed |= before != (len(self.short), len(self.long))

    def result(self) -> Harvest:
        return Harvest(dict(self.short), dict(self.long), self.depth_used, list(self.book.generators))


def _uncoupling_root(alpha: Root, beta: Root, roots: Iterable[Root]) -> Root:
    """短根 γ: γ+α 为短根且 γ+β ∉ Φ ∪ {0}"""
    for gamma in roots:
        if gamma.is_long:
            continue
        total = as_root(alpha.plus(gamma))
        if total is None or total.is_long:
            continue
        shifted = beta.plus(gamma)
        if any(shifted) and as_root(shifted) is None:
            return gamma
    raise RankError(f"没有可用于拆分 x_{alpha}·x_{beta} 的短根 (秩 {alpha.n} 不足)")


# ---------------------------------------------------------------------- 公开操作

def uncouple(g: np.ndarray, alpha: Root, beta: Root, ring: Ring,
             K: Optional[Subring] = None) -> Tuple[int, int, Tuple[Word, Word]]:
    """g = x_α(μ)·x_β(λ) ∈ H 时给出 (μ, λ) 及两因子的字

    字的字母表为 Ep(K) 根元素 (K 缺省为素子环) 加上 g 本身 (最后一个字母)。
    """
    space = get_space(ring, alpha.n)
    K = subring_generated(ring, []) if K is None else K
    book = LetterBook(space, K, [g])
    harvester = Harvester(book)
    mu, lam, short_word, long_word = harvester.uncouple(g, alpha, beta, ((book.extra_offset, 1),))
    return mu, lam, (short_word, long_word)


def u1_factorize(g: np.ndarray, ring: Ring, K: Optional[Subring] = None) -> Tuple[Dict[int, int], Dict[int, Word]]:
    """g ∈ U1 的坐标 μ_j 及每个 T_1j(μ_j) 在 Ep(K) ∪ {g} 上的字"""
    space = get_space(ring, g.shape[0] // 2)
    K = subring_generated(ring, []) if K is None else K
    book = LetterBook(space, K, [g])
    harvester = Harvester(book)
    if not u1_pattern(g, space):
        raise UsageError("u1_factorize 要求 g ∈ U1")
    harvester.factor_u1(g, ((book.extra_offset, 1),))
    coords = u1_coordinates(g, ring)
    words = {}
    for j, mu in coords.items():
        alpha = root_of_position(1, j, space.n)
        store = harvester.long if alpha.is_long else harvester.short
        if mu and mu in store:
            words[j] = harvester.word_for(alpha, mu)
    return coords, words


def entry_product_ring(gens: Sequence[np.ndarray], K: Subring) -> Subring:
    """K 与各生成元矩阵元两两乘积生成的子环"""
    ring = K.parent
    products = set(K.elements)
    for g in gens:
        entries = np.unique(np.asarray(g, dtype=np.uint8))
        products.update(int(x) for x in ring.table[np.ix_(entries, entries)].ravel())
    return subring_generated(ring, products)


def harvest_levels(inp: SubgroupInput, depth: Optional[int] = None, exploratory: bool = False) -> Harvest:
    if inp.n < 3 and not exploratory:
        raise RankError(f"水平收集需要 n ≥ 3，收到 n = {inp.n}")
    space = get_space(inp.ambient, inp.n)
    harvester = Harvester(LetterBook(space, inp.K, inp.extra_gens))
    harvester.deepen(config.harvest_depth if depth is None else depth)
    return harvester.result()


def _require_unit_param(fr: FormRing):
    if not fr.has_unit_param:
        raise UnsupportedError(f"正规化判据要求 1 ∈ Λ，形式环 {fr.label()} 不满足")


def normalizer_table(gens: Sequence[np.ndarray], fr: FormRing, n: int) -> np.ndarray:
    """形状 (生成元数, Ep(R,Λ) 生成元数) 的布尔表: g^{±1}·x·g^{∓1} ∈ Sp(R,Λ)"""
    _require_unit_param(fr)
    space = get_space(fr.ambient, n)
    batch = np.stack([np.asarray(g, dtype=np.uint8) for g in gens])
    inverses = space.inverse(batch)
    columns = []
    for x in ep_generators(fr, n):
        ok = bak_mask(space.conjugate_batch(batch, x), fr)
        ok &= bak_mask(space.conjugate_batch(inverses, x), fr)
        columns.append(ok)
    if not columns:
        return np.ones((len(batch), 0), dtype=bool)
    return np.stack(columns, axis=1)


def normalizes_mask(batch: np.ndarray, fr: FormRing, n: int, chunk_size: Optional[int] = None) -> np.ndarray:
    """批量判定 g ∈ N(R,Λ)；按块在线程池中计算，结果顺序与输入一致"""
    _require_unit_param(fr)
    space = get_space(fr.ambient, n)
    chunk_size = max(1, chunk_size or config.chunk_size)
    gens = ep_generators(fr, n)

    def check(chunk: np.ndarray) -> np.ndarray:
        inverses = space.inverse(chunk)
        ok = np.ones(len(chunk), dtype=bool)
        for x in gens:
            ok &= bak_mask(space.conjugate_batch(chunk, x), fr)
            ok &= bak_mask(space.conjugate_batch(inverses, x), fr)
        return ok

    chunks = [batch[s:s + chunk_size] for s in range(0, len(batch), chunk_size)]
    if not chunks:
        return np.zeros(0, dtype=bool)
    with ThreadPoolExecutor(max_workers=max(1, config.max_workers)) as executor:
        return np.concatenate(list(executor.map(check, chunks)))


def normalizes(g: np.ndarray, fr: FormRing, n: int) -> bool:
    return bool(normalizer_table([g], fr, n).all())


def _form_ring_from_levels(harvester: Harvester, entry_ring: Subring, K: Subring) -> FormRing:
    ring = K.parent
    R = subring_generated(ring, set(entry_ring.elements) | set(harvester.short))
    lam = form_param_generated(R, set(K.elements) | set(harvester.long))
    return FormRing(R, lam, K)


def _covered(harvester: Harvester, fr: FormRing) -> bool:
    return fr.R.elements <= set(harvester.short) and fr.lam.elements <= set(harvester.long)


def lower_certificates(harvester: Harvester, fr: FormRing) -> List[LevelCert]:
    n = harvester.space.n
    return [LevelCert(alpha, xi, harvester.word_for(alpha, xi))
            for alpha, xi in ep_generator_labels(fr, n)]


def check_certificates(certs: Sequence[LevelCert], generators: Sequence[np.ndarray],
                       space: SymplecticSpace) -> List[LevelCert]:
    """返回求值结果与 x_α(t) 不符的证书"""
    bad = []
    for cert in certs:
        if not np.array_equal(evaluate_word(cert.word, generators, space),
                              space.root_element(cert.root, cert.scalar)):
            bad.append(cert)
    return bad


def classify(inp: SubgroupInput, max_depth: Optional[int] = None, exploratory: bool = False,
             check_uniqueness: bool = True) -> SandwichReport:
    """求 H 的夹层形式环并给出证书；深度用尽仍未覆盖时返回 inconclusive"""
    if inp.n < 3 and not exploratory:
        raise RankError(f"夹层分类需要 n ≥ 3，收到 n = {inp.n} (可用 exploratory 模式)")
    space = get_space(inp.ambient, inp.n)
    book = LetterBook(space, inp.K, inp.extra_gens)
    harvester = Harvester(book)
    max_depth = config.max_depth if max_depth is None else max_depth
    degenerate = len(inp.K) == inp.ambient.size
    entry_ring = whole_ring(inp.ambient) if degenerate else entry_product_ring(inp.extra_gens, inp.K)

    fr: Optional[FormRing] = None
    table = np.zeros((len(book.generators), 0), dtype=bool)
    certified = False
    depths = [0] if degenerate else range(max_depth + 1)
    for depth in depths:
        check_interrupt()
        harvester.deepen(depth)
        fr = _form_ring_from_levels(harvester, entry_ring, inp.K)
        table = normalizer_table(book.generators, fr, inp.n)
        covered = _covered(harvester, fr)
        logger.debug(f"深度 {depth}: 候选形式环 {fr.label()}，覆盖={covered}，"
                     f"正规化={bool(table.all())}")
        if covered and table.all():
            certified = True
            break

    diagnostics = {
        'depth_used': harvester.depth_used,
        'p1_hits': harvester.p1_hits,
        'rank_skips': harvester.rank_skips,
        'short_levels': [inp.ambient.bits(x) for x in sorted(harvester.short)],
        'long_levels': [inp.ambient.bits(x) for x in sorted(harvester.long)],
    }
    certs: List[LevelCert] = []
    if certified:
        certs = lower_certificates(harvester, fr)
        bad = check_certificates(certs, book.generators, space)
        if bad:
            logger.error(f"{len(bad)} 个下侧证书求值失败")
            diagnostics['bad_certificates'] = [c.root.label() for c in bad]
            certified = False
    if not certified:
        diagnostics['uncovered_R'] = [inp.ambient.bits(x) for x in sorted(fr.R.elements - set(harvester.short))]
        diagnostics['uncovered_Lambda'] = [inp.ambient.bits(x)
                                           for x in sorted(fr.lam.elements - set(harvester.long))]
        diagnostics['failing_generators'] = [int(i) for i in np.flatnonzero(~table.all(axis=1))]

    status = STATUS_CERTIFIED if certified else STATUS_INCONCLUSIVE
    uniqueness, reason = UNIQUENESS_SKIPPED, '未认证，不做唯一性判定'
    if certified and check_uniqueness:
        uniqueness, reason = verify_uniqueness(book, fr)
    elif certified:
        reason = '已关闭唯一性判定'
    return SandwichReport(
        form_ring=fr if certified or exploratory else None,
        lower_certs=certs,
        upper_checks=[[bool(v) for v in row] for row in table],
        uniqueness=uniqueness,
        uniqueness_reason=reason,
        status=status,
        generators=list(book.generators),
        depth_used=harvester.depth_used,
        exploratory=exploratory or inp.n < 3,
        diagnostics=diagnostics,
    )


def verify_uniqueness(book: LetterBook, fr: FormRing) -> Tuple[str, str]:
    """检查 K 与 A 之间的其他形式环都不满足夹层关系

    对候选 (R', Λ'): 若某个 H 生成元不正规化 (R', Λ')，或某个 Ep(R', Λ') 生成元
    不在 N(R, Λ) 中 (从而不在 H 中)，候选即被排除。
    """
    space = book.space
    ring = space.ring
    n = space.n
    if ring.size > config.max_ring_size:
        return UNIQUENESS_SKIPPED, f"|A| = {ring.size} 超过唯一性判定上限 {config.max_ring_size}"
    H: Optional[object] = None
    for cand in enumerate_form_rings(ring, book.K):
        check_interrupt()
        if cand == fr:
            continue
        if not cand.has_unit_param:
            return UNIQUENESS_SKIPPED, f"候选 {cand.label()} 不含 1，正规化判据不适用"
        if not normalizer_table(book.generators, cand, n).all():
            continue
        mats = np.stack(ep_generators(cand, n))
        if not normalizes_mask(mats, fr, n).all():
            continue
        if not bak_mask(mats, fr).all():
            if H is None:
                H = closure(book.generators, space, cap=UNIQUENESS_CLOSURE_CAP)
            if not H.complete:
                return UNIQUENESS_SKIPPED, f"候选 {cand.label()} 需要枚举 H，超过上限"
            if not H.contains_mask(mats).all():
                continue
        logger.error(f"形式环 {cand.label()} 同样满足夹层关系")
        return UNIQUENESS_VIOLATED, f"形式环 {cand.label()} 同样满足夹层关系"
    return UNIQUENESS_VERIFIED, '其余候选形式环均被排除'


def random_subgroup_input(ambient: Ring, K: Subring, n: int, rng: np.random.Generator,
                          count: int = 1, length: Optional[int] = None) -> SubgroupInput:
    """额外生成元为 Sp_2n(A) 初等生成元 (长短根混合) 的随机乘积

    length 缺省时每个生成元的字长在 1..classify_word_length 中随机选取；
    短字给出真子群，长字几乎总是生成整个群。
    """
    space = get_space(ambient, n)
    whole = whole_ring(ambient)
    gens = ep_generators(FormRing(whole, FormParameter(whole, whole.elements), K), n)
    extra, specs = [], []
    for _ in range(count):
        k = int(rng.integers(1, config.classify_word_length + 1)) if length is None else length
        extra.append(space.random_element(gens, rng, k))
        specs.append(f"random:{k}")
    return SubgroupInput(ambient, K, n, extra, specs)


def _recheck_form_ring(ring: Ring, form: dict) -> Tuple[Optional[FormRing], CheckResult]:
    """报告中的 (R, Λ) 必须是子环与形式参数，且 1 ∈ Λ"""
    r_elems = frozenset(ring.from_bits(x) for x in form['R']['elements'])
    lam_elems = frozenset(ring.from_bits(x) for x in form['Lambda']['elements'])
    if subring_generated(ring, r_elems).elements != r_elems:
        return None, CheckResult('form_ring', CHECK_FAIL, "报告中的 R 不是子环")
    R = Subring(ring, r_elems)
    if not is_form_parameter(R, lam_elems):
        return None, CheckResult('form_ring', CHECK_FAIL, "报告中的 Λ 不是 R 的形式参数")
    fr = FormRing(R, FormParameter(R, lam_elems))
    if not fr.has_unit_param:
        return None, CheckResult('form_ring', CHECK_FAIL, "报告中的 Λ 不含 1，正规化判据不适用")
    return fr, CheckResult('form_ring', CHECK_PASS, f"{fr.label()} 是形式环")


def _recheck_lower(certs: List[dict], fr: FormRing, generators: List[np.ndarray],
                   space: SymplecticSpace) -> CheckResult:
    """每个 Ep(R,Λ) 生成元恰有一个证书，且证书字求值等于该根元素"""
    ring = space.ring
    n = space.n
    required = Counter((alpha.label(), ring.bits(xi)) for alpha, xi in ep_generator_labels(fr, n))
    present = Counter((cert['root'], cert['scalar']) for cert in certs)
    missing = sorted(required - present)
    surplus = sorted(present - required)
    if missing or surplus:
        return CheckResult('lower_certificates', CHECK_FAIL,
                           f"证书与 Ep 生成元不一一对应: 缺少 {len(missing)} 个，多出 {len(surplus)} 个",
                           counterexample={'missing': [':'.join(x) for x in missing],
                                           'surplus': [':'.join(x) for x in surplus]})
    bad = []
    for cert in certs:
        alpha = parse_root(cert['root'], n)
        expected = space.root_element(alpha, ring.from_bits(cert['scalar']))
        try:
            value = evaluate_word(make_word(cert['word']), generators, space)
        except UsageError:
            value = None
        if value is None or not np.array_equal(value, expected):
            bad.append(cert['root'] + ':' + cert['scalar'])
    status = CHECK_FAIL if bad else CHECK_PASS
    return CheckResult('lower_certificates', status, f"{len(certs) - len(bad)}/{len(certs)} 个证书通过",
                       counterexample={'failed': bad} if bad else None)


def _recheck_upper(upper: dict, fr: FormRing, generators: List[np.ndarray], space: SymplecticSpace,
                   certified: bool) -> CheckResult:
    """直接用共轭与 Bak 判据重算正规化表"""
    ep = ep_generators(fr, space.n)
    table = np.ones((len(generators), len(ep)), dtype=bool)
    if generators and ep:
        batch = np.stack(generators)
        inverses = space.inverse(batch)
        for col, x in enumerate(ep):
            table[:, col] = bak_mask(space.conjugate_batch(batch, x), fr) & \
                bak_mask(space.conjugate_batch(inverses, x), fr)
    data = {'generators': len(generators), 'ep_generators': len(ep)}
    rows = upper.get('table', [])
    rows_ok = isinstance(rows, list) and len(rows) == table.shape[0]
    if not rows_ok or any(not isinstance(row, list) or len(row) != table.shape[1] for row in rows):
        return CheckResult('upper_checks', CHECK_FAIL,
                           f"记录的正规化表形状与重算 {table.shape} 不符", data=data)
    recorded = np.array(rows, dtype=bool).reshape(table.shape)
    agree = bool(np.array_equal(table, recorded))
    ok = agree and (not certified or bool(table.all()))
    if not agree:
        detail = '正规化表与记录不一致'
    elif not ok:
        detail = '报告为已认证，但存在不正规化的生成元'
    else:
        detail = '正规化表一致'
    return CheckResult('upper_checks', CHECK_PASS if ok else CHECK_FAIL, detail, data=data)


def recheck_report(document: dict) -> List[CheckResult]:
    """只用矩阵算术重新验证报告中的证书 (不调用分类器)

    形式环: R 为子环、Λ 为含 1 的形式参数；
    下侧: 每个 Ep(R,Λ) 生成元恰有一个证书，证书字在报告记录的生成元上求值等于该根元素；
    上侧: 重算正规化表，必须与记录一致，已认证时必须全部为真。
    """
    ring = ring_from_spec(RingSpec.from_dict(document['ring']))
    n = int(document['n'])
    space = get_space(ring, n)
    result = document.get('result') or {}
    generators = [matrix_from_rows(rows, ring) for rows in document.get('generators', [])]
    certified = result.get('status') == STATUS_CERTIFIED
    form = result.get('form_ring')
    upper = result.get('upper_checks')

    if not form or upper is None:
        status = CHECK_FAIL if certified else CHECK_SKIP
        return [CheckResult('form_ring', status, '报告中没有形式环或上侧检查表')]
    fr, form_check = _recheck_form_ring(ring, form)
    checks = [form_check]
    if fr is None:
        return checks

    certs = result.get('lower_certificates') or []
    if not certs and not certified:
        checks.append(CheckResult('lower_certificates', CHECK_SKIP, '报告中没有下侧证书'))
    else:
        checks.append(_recheck_lower(certs, fr, generators, space))
    checks.append(_recheck_upper(upper, fr, generators, space, certified))
    return checks
