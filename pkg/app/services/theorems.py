#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""性质校验套件

每个校验返回 CheckResult (pass / fail / skip)。需要完整枚举的校验在闭包溢出时
返回 skip 并附带容量信息；失败时附带可重放的反例 (矩阵按报告格式序列化)。
"""

from typing import Callable, Dict, List, Optional

import numpy as np

from app.core.config import config
from app.core.errors import SandwichError
from app.core.logging import get_logger
from app.core.shutdown import check_interrupt
from app.models.group import GroupClosure
from app.models.report import CHECK_FAIL, CHECK_PASS, CHECK_SKIP, CheckResult, SubgroupInput
from app.models.ring import FormParameter, FormRing, Ring
from app.services.group_engine import closure, derived_subgroup, normal_closure
from app.services.ring_core import enumerate_form_rings, make_form_ring, subring_generated, whole_ring
from app.services.roots import angle_case, reflect, root_of_position
from app.services.sandwich import (STATUS_CERTIFIED, UNIQUENESS_VIOLATED, classify, normalizes_mask,
                                   random_subgroup_input)
from app.services.symplectic import (bak_mask, chevalley_commutator, ep_generators, evaluate_expansion,
                                     get_space, matrix_to_rows, symplectic_group_order)

logger = get_logger()

ClosureProgress = Optional[Callable[[int, int], None]]


def _serialize(ring: Ring, **mats) -> Dict[str, object]:
    return {name: matrix_to_rows(g, ring) for name, g in mats.items()}


def _overflow(name: str, G: GroupClosure) -> CheckResult:
    check_interrupt()
    return CheckResult(name, CHECK_SKIP, f"闭包超过容量上限 {G.cap} (已得 {len(G)} 个元素)",
                       data={'cap': G.cap, 'reached': len(G)})


def full_form_ring(A: Ring) -> FormRing:
    whole = whole_ring(A)
    return FormRing(whole, FormParameter(whole, whole.elements))


def zero_form_ring(A: Ring) -> FormRing:
    """(A, {0})，只含短根生成元"""
    whole = whole_ring(A)
    return FormRing(whole, FormParameter(whole, frozenset({0})))


def enumerate_sp(A: Ring, n: int, cap: Optional[int] = None, progress: ClosureProgress = None) -> GroupClosure:
    """Sp_2n(A) = Ep_2n(A, A) (有限环上)"""
    return closure(ep_generators(full_form_ring(A), n), get_space(A, n), cap, progress)


def unit_form_rings(A: Ring) -> List[FormRing]:
    """A 上所有满足 1 ∈ Λ 的形式环"""
    return [fr for fr in enumerate_form_rings(A) if fr.has_unit_param]


# ---------------------------------------------------------------------- 交换子公式

def commutator_suite(A: Ring, n: int) -> CheckResult:
    """逐个根对 α ≠ ±β 与标量对验证 Chevalley 交换子公式"""
    space = get_space(A, n)
    pairs = 0
    scalars = [x for x in A.elements() if x]
    for alpha in space.roots:
        for beta in space.roots:
            if alpha == beta or alpha == -beta:
                continue
            for lam in scalars:
                x = space.root_element(alpha, lam)
                for mu in scalars:
                    y = space.root_element(beta, mu)
                    expected = evaluate_expansion(chevalley_commutator(alpha, lam, beta, mu, A), A, n)
                    pairs += 1
                    if not np.array_equal(space.commutator(x, y), expected):
                        return CheckResult(
                            f"commutator[{A.name},n={n}]", CHECK_FAIL,
                            f"[x_{alpha}({A.format(lam)}), x_{beta}({A.format(mu)})] 与公式 "
                            f"({angle_case(alpha, beta)}) 不符",
                            counterexample=_serialize(A, x=x, y=y))
    return CheckResult(f"commutator[{A.name},n={n}]", CHECK_PASS, f"{pairs} 组根对与标量全部符合",
                       data={'cases': pairs})


def weyl_suite(A: Ring, n: int) -> CheckResult:
    """w_α·x_β(t)·w_α⁻¹ = x_{s_α(β)}(t) (特征 2 无符号)"""
    space = get_space(A, n)
    cases = 0
    for alpha in space.roots:
        w = space.weyl_element(alpha)
        for beta in space.roots:
            target = reflect(alpha, beta)
            for t in A.elements():
                if not t:
                    continue
                cases += 1
                got = space.conjugate(w, space.root_element(beta, t))
                if not np.array_equal(got, space.root_element(target, t)):
                    return CheckResult(f"weyl[{A.name},n={n}]", CHECK_FAIL,
                                       f"w_{alpha} 未把 X_{beta} 映为 X_{target}",
                                       counterexample=_serialize(A, w=w, got=got))
    return CheckResult(f"weyl[{A.name},n={n}]", CHECK_PASS, f"{cases} 个共轭全部符合", data={'cases': cases})


# ---------------------------------------------------------------------- 成员判据

def membership_suite(A: Ring, n: int = 2, sp: Optional[GroupClosure] = None) -> List[CheckResult]:
    """每个 1 ∈ Λ 的 (R,Λ): Bak 判据定义的集合与 Ep(R,Λ) 的闭包逐元素相等"""
    sp = enumerate_sp(A, n) if sp is None else sp
    if not sp.complete:
        return [_overflow(f"membership[{A.name},n={n}]", sp)]
    space = sp.space
    results = []
    for fr in unit_form_rings(A):
        name = f"membership[{A.name},{fr.label()},n={n}]"
        ep = closure(ep_generators(fr, n), space)
        if not ep.complete:
            results.append(_overflow(name, ep))
            continue
        mask = bak_mask(sp.elements, fr)
        in_ep = ep.contains_mask(sp.elements)
        diff = np.flatnonzero(mask != in_ep)
        if len(diff) or int(mask.sum()) != len(ep):
            g = sp.elements[diff[0]] if len(diff) else space.identity
            results.append(CheckResult(name, CHECK_FAIL, f"判据集合 {int(mask.sum())} 与闭包 {len(ep)} 不一致",
                                       counterexample=_serialize(A, g=g)))
        else:
            results.append(CheckResult(name, CHECK_PASS, f"两者均为 {len(ep)} 个元素", data={'order': len(ep)}))
    return results


def normalizer_oracle_suite(A: Ring, n: int = 2, sp: Optional[GroupClosure] = None) -> List[CheckResult]:
    """normalizes 与 “对枚举的 Ep 做共轭封闭” 的暴力判定逐元素一致"""
    sp = enumerate_sp(A, n) if sp is None else sp
    if not sp.complete:
        return [_overflow(f"normalizer_oracle[{A.name},n={n}]", sp)]
    space = sp.space
    results = []
    for fr in unit_form_rings(A):
        name = f"normalizer_oracle[{A.name},{fr.label()},n={n}]"
        ep = closure(ep_generators(fr, n), space)
        if not ep.complete:
            results.append(_overflow(name, ep))
            continue
        fast = normalizes_mask(sp.elements, fr, n)
        brute = np.ones(len(sp), dtype=bool)
        for start, chunk in sp.iter_chunks(config.chunk_size):
            inverses = space.inverse(chunk)
            ok = np.ones(len(chunk), dtype=bool)
            for x in ep_generators(fr, n):
                ok &= ep.contains_mask(space.conjugate_batch(chunk, x))
                ok &= ep.contains_mask(space.conjugate_batch(inverses, x))
            brute[start:start + len(chunk)] = ok
        diff = np.flatnonzero(fast != brute)
        if len(diff):
            results.append(CheckResult(name, CHECK_FAIL, f"{len(diff)} 个元素判定不一致",
                                       counterexample=_serialize(A, g=sp.elements[diff[0]])))
        else:
            results.append(CheckResult(name, CHECK_PASS, f"|N| = {int(fast.sum())}，零分歧",
                                       data={'normalizer_order': int(fast.sum())}))
    return results


def entry_product_suite(fr: FormRing, n: int = 2, sp: Optional[GroupClosure] = None) -> CheckResult:
    """N(R,Λ) 中每个元素的矩阵元两两乘积都属于 R"""
    A = fr.ambient
    name = f"entry_products[{A.name},{fr.label()},n={n}]"
    sp = enumerate_sp(A, n) if sp is None else sp
    if not sp.complete:
        return _overflow(name, sp)
    r_mask = fr.R.mask()
    checked = 0
    for _, chunk in sp.iter_chunks(config.chunk_size):
        members = chunk[normalizes_mask(chunk, fr, n)]
        if not len(members):
            continue
        flat = members.reshape(len(members), -1)
        products = A.table[flat[:, :, None], flat[:, None, :]]
        ok = r_mask[products].all(axis=(1, 2))
        checked += len(members)
        if not ok.all():
            return CheckResult(name, CHECK_FAIL, "存在矩阵元乘积不在 R 中的正规化元",
                               counterexample=_serialize(A, g=members[np.flatnonzero(~ok)[0]]))
    return CheckResult(name, CHECK_PASS, f"{checked} 个正规化元全部满足", data={'checked': checked})


# ---------------------------------------------------------------------- 正规化子结构

def _index_pairs(left_size: int, right_size: int, rng: np.random.Generator):
    """全部下标对 (不超过 full_sweep_limit² 对时) 或 pair_samples 组随机对"""
    limit = config.full_sweep_limit
    if left_size * right_size <= limit * limit:
        left = np.repeat(np.arange(left_size), right_size)
        right = np.tile(np.arange(right_size), left_size)
        return left, right, 'full'
    samples = config.pair_samples
    return rng.integers(0, left_size, size=samples), rng.integers(0, right_size, size=samples), 'sampled'


def _first_failure(left: np.ndarray, right: np.ndarray, test) -> Optional[int]:
    step = config.chunk_size
    for start in range(0, len(left), step):
        bad = np.flatnonzero(~test(left[start:start + step], right[start:start + step]))
        if len(bad):
            return start + int(bad[0])
    return None


def verify_theorem2(fr: FormRing, A: Ring, n: int = 2, sp: Optional[GroupClosure] = None,
                    rng: Optional[np.random.Generator] = None) -> List[CheckResult]:
    """Sp(R,Λ) = Sp(R) ∩ N，N 正规化 Sp(R,Λ)，[N, N] ≤ Sp(R,Λ)

    后两项在对数不超过 full_sweep_limit² 时逐对穷举，否则抽样 pair_samples 对；
    结果的 data['mode'] 记录实际方式。
    """
    if fr.ambient != A:
        raise SandwichError("形式环不在给定环 A 上")
    label = f"{A.name},{fr.label()},n={n}"
    names = [f"theorem2.{k}[{label}]" for k in (1, 2, 3)]
    sp = enumerate_sp(A, n) if sp is None else sp
    if not sp.complete:
        return [_overflow(name, sp) for name in names]
    rng = np.random.default_rng(config.seed) if rng is None else rng
    space = sp.space
    elements = sp.elements

    in_n = normalizes_mask(elements, fr, n)
    in_bak = bak_mask(elements, fr)
    entries_in_r = fr.R.mask()[elements].all(axis=(1, 2))
    normalizer = elements[in_n]
    bak_set = elements[in_bak]
    results = []

    diff = np.flatnonzero((in_n & entries_in_r) != in_bak)
    if len(diff):
        results.append(CheckResult(names[0], CHECK_FAIL, f"{len(diff)} 个元素不满足 Sp(R,Λ) = Sp(R) ∩ N",
                                   counterexample=_serialize(A, g=elements[diff[0]])))
    else:
        results.append(CheckResult(names[0], CHECK_PASS, f"|Sp(R,Λ)| = {len(bak_set)}，|N| = {len(normalizer)}",
                                   data={'bak_order': len(bak_set), 'normalizer_order': len(normalizer)}))

    def conjugates_stay(gi, si):
        g = normalizer[gi]
        return bak_mask(space.matmul(space.matmul(g, bak_set[si]), space.inverse(g)), fr)

    gi, si, mode = _index_pairs(len(normalizer), len(bak_set), rng)
    k = _first_failure(gi, si, conjugates_stay)
    if k is not None:
        results.append(CheckResult(names[1], CHECK_FAIL, f"N 中元素的共轭把 Sp(R,Λ) 的元素移出 ({mode})",
                                   counterexample=_serialize(A, g=normalizer[gi[k]], s=bak_set[si[k]])))
    else:
        results.append(CheckResult(names[1], CHECK_PASS, f"{len(gi)} 组共轭 ({mode}) 全部留在 Sp(R,Λ) 中",
                                   data={'pairs': int(len(gi)), 'mode': mode}))

    def commutators_inside(li, ri):
        a, b = normalizer[li], normalizer[ri]
        return bak_mask(space.matmul(space.matmul(a, b), space.matmul(space.inverse(a), space.inverse(b))), fr)

    left, right, mode = _index_pairs(len(normalizer), len(normalizer), rng)
    k = _first_failure(left, right, commutators_inside)
    if k is not None:
        results.append(CheckResult(names[2], CHECK_FAIL, f"存在交换子不在 Sp(R,Λ) 中 ({mode})",
                                   counterexample=_serialize(A, g=normalizer[left[k]], h=normalizer[right[k]])))
    else:
        results.append(CheckResult(names[2], CHECK_PASS, f"{len(left)} 组交换子 ({mode}) 全部属于 Sp(R,Λ)",
                                   data={'pairs': int(len(left)), 'mode': mode}))
    return results


# ---------------------------------------------------------------------- 小幂幺恒等式

def small_unipotent_identity(g: np.ndarray, h: np.ndarray, alpha, ring: Ring) -> bool:
    """y = h^g = g⁻¹·h·g；对所有 s, t 检查 [y⁻¹·x_α(s)·y, x_α(t)] = e"""
    space = get_space(ring, g.shape[0] // 2)
    y = space.matmul(space.matmul(space.inverse(g), h), g)
    y_inv = space.inverse(y)
    level = np.stack([space.root_element(alpha, t) for t in ring.elements()])
    moved = space.matmul(space.matmul(y_inv, level), y)
    for x in moved:
        comm = space.matmul(space.matmul(x[None], level), space.matmul(space.inverse(x)[None],
                                                                        space.inverse(level)))
        if not (comm == space.identity).all():
            return False
    return True


def identity_suite(A: Ring, n: int = 3, trials: Optional[int] = None,
                   rng: Optional[np.random.Generator] = None) -> List[CheckResult]:
    """短根根元素的共轭满足恒等式；对长根根元素只搜索反例，不做断言"""
    rng = np.random.default_rng(config.seed) if rng is None else rng
    trials = config.trials if trials is None else trials
    space = get_space(A, n)
    gens = ep_generators(full_form_ring(A), n)
    short_roots = [a for a in space.roots if not a.is_long]
    long_roots = [a for a in space.roots if a.is_long]
    scalars = [x for x in A.elements() if x]
    name = f"identity[{A.name},n={n}]"
    for _ in range(trials):
        g = space.random_element(gens, rng, config.random_word_length)
        gamma = short_roots[int(rng.integers(len(short_roots)))]
        h = space.root_element(gamma, scalars[int(rng.integers(len(scalars)))])
        alpha = long_roots[int(rng.integers(len(long_roots)))]
        if not small_unipotent_identity(g, h, alpha, A):
            return [CheckResult(name, CHECK_FAIL, f"h = x_{gamma}(·)，α = {alpha} 时恒等式不成立",
                                counterexample=_serialize(A, g=g, h=h))]
    results = [CheckResult(name, CHECK_PASS, f"{trials} 次随机试验全部成立", data={'trials': trials})]

    found = None
    long_h = space.root_element(root_of_position(1, -1, n), space.unit)
    search = max(1, trials // 10)
    for _ in range(search):
        g = space.random_element(gens, rng, config.random_word_length)
        alpha = long_roots[int(rng.integers(len(long_roots)))]
        if not small_unipotent_identity(g, long_h, alpha, A):
            found = (g, alpha)
            break
    detail = f"长根根元素: {search} 次搜索" + ("找到反例" if found else "未找到反例")
    results.append(CheckResult(f"identity_long_search[{A.name},n={n}]", CHECK_PASS, detail,
                               data={'searched': search, 'found': found is not None},
                               counterexample=dict(_serialize(A, g=found[0]), alpha=found[1].label())
                               if found else None))
    return results


# ---------------------------------------------------------------------- 生成与正规闭包

def p1_generators(fr: FormRing, n: int) -> List[np.ndarray]:
    """{T_1i(μ), T_i1(μ) : i ≠ ±1, μ ∈ R} ∪ {T_{1,-1}(λ), T_{-1,1}(λ) : λ ∈ Λ}"""
    space = get_space(fr.ambient, n)
    gens = []
    for i in space.order:
        if i in (1, -1):
            continue
        for mu in fr.R.nonzero():
            gens.append(space.transvection(1, i, mu))
            gens.append(space.transvection(i, 1, mu))
    for lam in fr.lam.nonzero():
        gens.append(space.transvection(1, -1, lam))
        gens.append(space.transvection(-1, 1, lam))
    return gens


def verify_ep_generation_from_p1(fr: FormRing, n: int, progress: ClosureProgress = None) -> CheckResult:
    name = f"p1_generation[{fr.ambient.name},{fr.label()},n={n}]"
    space = get_space(fr.ambient, n)
    full = closure(ep_generators(fr, n), space, progress=progress)
    if not full.complete:
        return _overflow(name, full)
    restricted = closure(p1_generators(fr, n), space, progress=progress)
    if not restricted.complete:
        return _overflow(name, restricted)
    if not full.same_elements(restricted):
        return CheckResult(name, CHECK_FAIL, f"受限生成元闭包 {len(restricted)} ≠ Ep 闭包 {len(full)}")
    return CheckResult(name, CHECK_PASS, f"两个闭包相同，均为 {len(full)} 个元素", data={'order': len(full)})


def nsofgu_suite(fr: FormRing, n: int, progress: ClosureProgress = None) -> List[CheckResult]:
    """单个根元素在 Ep 共轭下的正规闭包等于 Ep 本身"""
    space = get_space(fr.ambient, n)
    full = closure(ep_generators(fr, n), space, progress=progress)
    label = f"{fr.ambient.name},{fr.label()},n={n}"
    if not full.complete:
        return [_overflow(f"nsofgu[{label}]", full)]
    seeds = [('T[1,2](1)', space.transvection(1, 2, space.unit))]
    long_scalar = next((x for x in fr.lam.nonzero()), None)
    if long_scalar is not None:
        seeds.append((f"T[1,-1]({fr.ambient.format(long_scalar)})", space.transvection(1, -1, long_scalar)))
    results = []
    for seed_label, seed in seeds:
        name = f"nsofgu[{label},{seed_label}]"
        nc = normal_closure([seed], ep_generators(fr, n), space, progress=progress)
        if not nc.complete:
            results.append(_overflow(name, nc))
        elif full.same_elements(nc):
            results.append(CheckResult(name, CHECK_PASS, f"正规闭包为全部 {len(full)} 个元素",
                                       data={'order': len(nc)}))
        else:
            results.append(CheckResult(name, CHECK_FAIL, f"正规闭包 {len(nc)} ≠ Ep {len(full)}"))
    return results


def closure_order_suite(A: Ring, n: int, progress: ClosureProgress = None) -> CheckResult:
    """Ep(A, A) 的闭包阶与有限域公式对照 (只对素域 F2 等有公式的情形)"""
    name = f"closure_order[{A.name},n={n}]"
    G = enumerate_sp(A, n, progress=progress)
    if not G.complete:
        return _overflow(name, G)
    expected = symplectic_group_order(A.size, n) if _is_field(A) else None
    if expected is not None and expected != len(G):
        return CheckResult(name, CHECK_FAIL, f"闭包阶 {len(G)} ≠ 公式 {expected}")
    return CheckResult(name, CHECK_PASS, f"|Sp_{2 * n}({A.name})| = {len(G)}",
                       data={'order': len(G), 'formula': expected})


def _is_field(A: Ring) -> bool:
    return all(any(A.mul(x, y) == A.unit for y in A.elements()) for x in A.elements() if x)


def perfectness_suite(A: Ring, n: int, progress: ClosureProgress = None) -> CheckResult:
    """D(Ep_2n(A)) 与 Ep_2n(A) 比较；n = 2 时记录指数而不断言"""
    name = f"perfect[{A.name},n={n}]"
    G = enumerate_sp(A, n, progress=progress)
    if not G.complete:
        return _overflow(name, G)
    D = derived_subgroup(G)
    if not D.complete:
        return _overflow(name, D)
    index = len(G) // len(D)
    if n >= 3 and index != 1:
        return CheckResult(name, CHECK_FAIL, f"|G : D(G)| = {index}，不是完美群")
    return CheckResult(name, CHECK_PASS, f"|G| = {len(G)}，|D(G)| = {len(D)}",
                       data={'order': len(G), 'derived_order': len(D), 'index': index})


# ---------------------------------------------------------------------- 分类器

def classify_fixed_points(A: Ring, n: int = 3, max_depth: Optional[int] = None) -> List[CheckResult]:
    """对 F2 与 A 之间每个 1 ∈ Λ 的 (R,Λ)，classify(⟨Ep(R,Λ)⟩) 必须恰好认证 (R,Λ)"""
    K = subring_generated(A, [])
    results = []
    for fr in enumerate_form_rings(A, K):
        if not fr.has_unit_param:
            continue
        name = f"fixed_point[{A.name},{fr.label()},n={n}]"
        inp = SubgroupInput(A, K, n, ep_generators(fr, n))
        report = classify(inp, max_depth)
        got = report.form_ring
        expected_labels = len(ep_generators(fr, n))
        if report.status != STATUS_CERTIFIED or got is None:
            results.append(CheckResult(name, CHECK_FAIL, "未认证", data=report.diagnostics))
        elif got.R != fr.R or got.lam != fr.lam:
            results.append(CheckResult(name, CHECK_FAIL, f"认证为 {got.label()}"))
        elif len(report.lower_certs) != expected_labels or report.uniqueness == UNIQUENESS_VIOLATED:
            results.append(CheckResult(name, CHECK_FAIL,
                                       f"证书 {len(report.lower_certs)}/{expected_labels}，唯一性 {report.uniqueness}"))
        else:
            results.append(CheckResult(name, CHECK_PASS, f"证书 {expected_labels} 个，唯一性 {report.uniqueness}",
                                       data={'certificates': expected_labels, 'uniqueness': report.uniqueness}))
    return results


def classify_random_suite(A: Ring, n: int = 3, trials: Optional[int] = None,
                          rng: Optional[np.random.Generator] = None,
                          max_depth: Optional[int] = None) -> CheckResult:
    """随机额外生成元 (1–2 个短字) 的分类必须全部认证；data 记录真子夹层的次数"""
    rng = np.random.default_rng(config.seed) if rng is None else rng
    trials = config.classify_trials if trials is None else trials
    K = subring_generated(A, [])
    name = f"classify_random[{A.name},n={n}]"
    seen: Dict[str, int] = {}
    proper = 0
    for trial in range(trials):
        check_interrupt()
        inp = random_subgroup_input(A, K, n, rng, count=int(rng.integers(1, 3)))
        report = classify(inp, max_depth)
        fr = report.form_ring
        if report.status != STATUS_CERTIFIED or fr is None:
            return CheckResult(name, CHECK_FAIL, f"第 {trial} 次试验未认证",
                               data=report.diagnostics,
                               counterexample={f"g{i}": matrix_to_rows(g, A) for i, g in enumerate(inp.extra_gens)})
        if not (K.elements <= fr.lam.elements <= fr.R.elements) or not fr.has_unit_param:
            return CheckResult(name, CHECK_FAIL, f"第 {trial} 次试验的形式环 {fr.label()} 不满足 K ⊆ Λ ⊆ R")
        if report.uniqueness == UNIQUENESS_VIOLATED:
            return CheckResult(name, CHECK_FAIL, f"第 {trial} 次试验唯一性被破坏: {report.uniqueness_reason}")
        seen[fr.label()] = seen.get(fr.label(), 0) + 1
        proper += len(fr.R) < A.size or len(fr.lam) < A.size
    return CheckResult(name, CHECK_PASS, f"{trials} 次试验全部认证，其中 {proper} 次为真子夹层",
                       data={'form_rings': seen, 'proper': proper})


# ---------------------------------------------------------------------- 套件调度

SUITES = ('commutator', 'membership', 'theorem2', 'lemmas', 'classify', 'all')


def _theorem2_instances(catalog) -> List[FormRing]:
    out = []
    for spec in config.theorem2_instances:
        A = catalog.ring(spec['ambient'])
        r_gens = [A.parse(x) for x in spec.get('r_gens', [])]
        lam_gens = [A.parse(x) for x in spec.get('lambda_gens', [])]
        out.append(make_form_ring(A, r_gens, lam_gens))
    return out


def run_suite(suite: str, catalog, rng: Optional[np.random.Generator] = None,
              progress: ClosureProgress = None, trials: Optional[int] = None) -> List[CheckResult]:
    """按名称运行校验套件，结果顺序固定"""
    if suite not in SUITES:
        raise SandwichError(f"未知套件 {suite}，可选: {', '.join(SUITES)}")
    rng = np.random.default_rng(config.seed) if rng is None else rng
    results: List[CheckResult] = []
    if suite in ('commutator', 'all'):
        for name in config.commutator_rings:
            check_interrupt()
            A = catalog.ring(name)
            results.append(commutator_suite(A, 3))
            results.append(weyl_suite(A, 3))
    if suite in ('membership', 'all'):
        for name in config.membership_rings:
            check_interrupt()
            A = catalog.ring(name)
            sp = enumerate_sp(A, 2, progress=progress)
            results.extend(membership_suite(A, 2, sp))
            results.extend(normalizer_oracle_suite(A, 2, sp))
    if suite in ('theorem2', 'all'):
        sp_cache: Dict[str, GroupClosure] = {}
        for fr in _theorem2_instances(catalog):
            check_interrupt()
            A = fr.ambient
            if A.name not in sp_cache:
                sp_cache[A.name] = enumerate_sp(A, 2, progress=progress)
            results.extend(verify_theorem2(fr, A, 2, sp_cache[A.name], rng))
            results.append(entry_product_suite(fr, 2, sp_cache[A.name]))
    if suite in ('lemmas', 'all'):
        check_interrupt()
        F2 = catalog.ring('F2')
        F2eps = catalog.ring('F2eps')
        results.extend(identity_suite(F2eps, 3, trials, rng))
        prime = full_form_ring(F2)
        results.append(verify_ep_generation_from_p1(prime, 3, progress))
        results.append(verify_ep_generation_from_p1(make_form_ring(F2eps, [F2eps.parse('eps')]), 2, progress))
        results.append(verify_ep_generation_from_p1(zero_form_ring(F2), 2, progress))
        results.extend(nsofgu_suite(prime, 3, progress))
        results.extend(nsofgu_suite(make_form_ring(F2eps, [F2eps.parse('eps')]), 2, progress))
        results.append(closure_order_suite(F2, 2, progress))
        results.append(closure_order_suite(F2, 3, progress))
        results.append(perfectness_suite(F2, 3, progress))
    if suite in ('classify', 'all'):
        check_interrupt()
        for name in ('F2eps', 'F4'):
            results.extend(classify_fixed_points(catalog.ring(name), 3))
        results.append(classify_random_suite(catalog.ring('F2eps'), 3, trials, rng))
    for r in results:
        logger.debug(f"{r.name}: {r.status} {r.detail}")
    return results
