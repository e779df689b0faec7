#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""辛群 Sp_2n(A) 的矩阵模型

矩阵是形状 (2n, 2n) 的 np.uint8 数组，批量矩阵形状为 (N, 2n, 2n)；
元素为环元素位掩码，行列按 I = (1, ..., n, -n, ..., -1) 存储。
特征 2 下所有符号都消失，Gram 矩阵 F 是反对角置换矩阵。
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from app.core.errors import PatternError, UsageError
from app.models.ring import FormParameter, FormRing, Ring
from app.services.roots import (Root, angle_case, as_root, enumerate_roots, fiber, index_order,
                                position, root_of_position, root_position)

Matrix = np.ndarray


class SymplecticSpace:
    """固定环 A 与秩 n 的矩阵运算上下文"""

    def __init__(self, ring: Ring, n: int):
        if n < 1:
            raise UsageError(f"秩 n 必须至少为 1，收到 {n}")
        self.ring = ring
        self.n = n
        self.m = 2 * n
        self.table = ring.table
        self.unit = ring.unit
        self.order = index_order(n)
        self.roots = enumerate_roots(n)
        self.identity = (np.eye(self.m, dtype=np.uint8) * ring.unit).astype(np.uint8)
        self.gram = self.identity[::-1].copy()
        self._shifts = np.arange(ring.dim, dtype=np.uint8)
        self.key_bits = self.m * self.m * ring.dim
        self.key_bytes = (self.key_bits + 7) // 8
        self.compact_keys = self.key_bytes <= 8

    def __repr__(self) -> str:
        return f"SymplecticSpace({self.ring.name}, n={self.n})"

    def pos(self, k: int) -> int:
        return position(k, self.n)

    def zeros(self) -> Matrix:
        return np.zeros((self.m, self.m), dtype=np.uint8)

    # ------------------------------------------------------------------ 初等矩阵

    def transvection(self, i: int, j: int, xi: int) -> Matrix:
        """T_ij(ξ) = e + ξe_ij + ξe_{-j,-i}；j = -i 时只有一个非对角元"""
        if i == j:
            raise UsageError(f"T_ij 要求 i ≠ j，收到 i = j = {i}")
        p, q = self.pos(i), self.pos(j)
        g = self.identity.copy()
        if xi:
            g[p, q] ^= xi
            if j != -i:
                g[self.pos(-j), self.pos(-i)] ^= xi
        return g

    def root_element(self, alpha: Root, xi: int) -> Matrix:
        if alpha.n != self.n:
            raise UsageError(f"根 {alpha} 不属于 C_{self.n}")
        i, j = root_position(alpha)
        return self.transvection(i, j, xi)

    def weyl_element(self, alpha: Root) -> Matrix:
        """w_α = x_α(1)·x_{-α}(1)·x_α(1)，特征 2 下是置换矩阵"""
        x = self.root_element(alpha, self.unit)
        y = self.root_element(-alpha, self.unit)
        return self.matmul(self.matmul(x, y), x)

    # ------------------------------------------------------------------ 算术

    def scale(self, xi: int, arr: np.ndarray) -> np.ndarray:
        if xi == self.unit:
            return arr
        return self.table[xi][arr]

    def matmul(self, a: Matrix, b: Matrix) -> Matrix:
        """环上矩阵乘法，支持 (..., m, m) 批量广播"""
        prod = self.table[a[..., :, :, None], b[..., None, :, :]]
        return np.bitwise_xor.reduce(prod, axis=-2)

    def product(self, mats: Iterable[Matrix]) -> Matrix:
        out = self.identity.copy()
        for g in mats:
            out = self.matmul(out, g)
        return out

    @staticmethod
    def inverse(g: Matrix) -> Matrix:
        """g⁻¹ = F·ᵀg·F，即 (g⁻¹)_ij = g_{-j,-i}"""
        return np.ascontiguousarray(np.swapaxes(g, -1, -2)[..., ::-1, ::-1])

    def commutator(self, a: Matrix, b: Matrix) -> Matrix:
        """[a, b] = a·b·a⁻¹·b⁻¹"""
        return self.matmul(self.matmul(a, b), self.matmul(self.inverse(a), self.inverse(b)))

    def conjugate(self, g: Matrix, x: Matrix) -> Matrix:
        """g·x·g⁻¹"""
        return self.matmul(self.matmul(g, x), self.inverse(g))

    def is_identity(self, g: Matrix) -> bool:
        return bool(np.array_equal(g, self.identity))

    def symplectic_mask(self, batch: Matrix) -> np.ndarray:
        gram = self.matmul(np.swapaxes(batch, -1, -2), batch[..., ::-1, :])
        return (gram == self.gram).all(axis=(-2, -1))

    def is_symplectic(self, g: Matrix) -> bool:
        g = np.asarray(g)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise UsageError(f"需要方阵，收到形状 {g.shape}")
        if g.shape[0] % 2:
            raise UsageError(f"辛矩阵的阶必须为偶数，收到 {g.shape[0]}")
        if g.shape[0] != self.m:
            return False
        return bool(self.symplectic_mask(g))

    # ------------------------------------------------------------------ 稀疏批量作用

    def _terms(self, mat: Matrix) -> List[List[Tuple[int, int]]]:
        return [[(j, int(mat[i, j])) for j in np.flatnonzero(mat[i])] for i in range(self.m)]

    def left_apply(self, mat: Matrix, batch: Matrix) -> Matrix:
        """mat·batch，按 mat 的稀疏行做行变换"""
        out = np.empty_like(batch)
        for i, terms in enumerate(self._terms(mat)):
            if terms == [(i, self.unit)]:
                out[:, i, :] = batch[:, i, :]
                continue
            acc = np.zeros_like(batch[:, i, :])
            for j, xi in terms:
                acc ^= self.scale(xi, batch[:, j, :])
            out[:, i, :] = acc
        return out

    def right_apply(self, batch: Matrix, mat: Matrix) -> Matrix:
        """batch·mat，按 mat 的稀疏列做列变换"""
        out = np.empty_like(batch)
        for j, terms in enumerate(self._terms(mat.T)):
            if terms == [(j, self.unit)]:
                out[:, :, j] = batch[:, :, j]
                continue
            acc = np.zeros_like(batch[:, :, j])
            for i, xi in terms:
                acc ^= self.scale(xi, batch[:, :, i])
            out[:, :, j] = acc
        return out

    def conjugate_batch(self, batch: Matrix, x: Matrix) -> Matrix:
        """对每个 g 计算 g·x·g⁻¹ = e + Σ ξ_pq (g 的第 p 列)(g⁻¹ 的第 q 行)"""
        inv = self.inverse(batch)
        acc = np.zeros_like(batch)
        diff = x ^ self.identity
        for p, q in zip(*np.nonzero(diff)):
            col = self.scale(int(diff[p, q]), batch[:, :, p])
            acc ^= self.table[col[:, :, None], inv[:, None, q, :]]
        return acc ^ self.identity

    # ------------------------------------------------------------------ 规范编码

    def encode(self, batch: Matrix) -> np.ndarray:
        """按行优先、基坐标顺序打包为 4n²·d 位"""
        batch = batch.reshape(-1, self.m * self.m)
        bits = (batch[:, :, None] >> self._shifts) & 1
        return np.packbits(bits.reshape(len(batch), -1).astype(np.uint8), axis=1)

    def decode(self, packed: np.ndarray) -> Matrix:
        bits = np.unpackbits(packed, axis=1, count=self.key_bits).reshape(-1, self.m * self.m, self.ring.dim)
        values = np.bitwise_or.reduce(bits << self._shifts, axis=2).astype(np.uint8)
        return values.reshape(-1, self.m, self.m)

    def keys(self, batch: Matrix) -> Union[np.ndarray, List[bytes]]:
        """紧凑模式 (≤ 64 位) 返回 uint64 数组，否则返回 bytes 列表"""
        packed = self.encode(batch)
        if self.compact_keys:
            padded = np.zeros((len(packed), 8), dtype=np.uint8)
            padded[:, :self.key_bytes] = packed
            return padded.view('>u8').ravel().astype(np.uint64)
        return [row.tobytes() for row in packed]

    def key(self, g: Matrix):
        k = self.keys(g[None])[0]
        return int(k) if self.compact_keys else k

    # ------------------------------------------------------------------ 根元素识别

    def match_root_element(self, g: Matrix) -> Optional[Tuple[Root, int]]:
        """若 g = x_α(t) (t ≠ 0) 则返回 (α, t)"""
        diff = g ^ self.identity
        rows, cols = np.nonzero(diff)
        if len(rows) not in (1, 2):
            return None
        alpha = root_of_position(int(self.order[rows[0]]), int(self.order[cols[0]]), self.n) \
            if rows[0] != cols[0] else None
        if alpha is None:
            return None
        xi = int(diff[rows[0], cols[0]])
        if np.array_equal(self.root_element(alpha, xi), g):
            return alpha, xi
        return None

    def match_two_factor(self, g: Matrix) -> Optional[Tuple[Root, Root]]:
        """若 g = x_α(μ)·x_β(λ)，α 短、β 长且 α+β 不是根，返回 (α, β)"""
        diff = g ^ self.identity
        if np.count_nonzero(diff) != 3:
            return None
        for alpha in self.roots:
            if alpha.is_long:
                continue
            i, j = root_position(alpha)
            mu = int(g[self.pos(i), self.pos(j)])
            if not mu:
                continue
            for beta in self.roots:
                if not beta.is_long or as_root(alpha.plus(beta)) is not None:
                    continue
                k, l = root_position(beta)
                lam = int(g[self.pos(k), self.pos(l)])
                if lam and np.array_equal(
                        self.matmul(self.root_element(alpha, mu), self.root_element(beta, lam)), g):
                    return alpha, beta
        return None

    def two_factor_scalars(self, g: Matrix, alpha: Root, beta: Root) -> Tuple[int, int]:
        """读取 g = x_α(μ)·x_β(λ) 的 (μ, λ)，形状不符时抛出 PatternError"""
        if alpha.is_long or not beta.is_long:
            raise PatternError(f"需要短根 α 与长根 β，收到 {alpha}, {beta}")
        if as_root(alpha.plus(beta)) is not None:
            raise PatternError(f"{alpha} + {beta} 是根，两个因子不交换")
        i, j = root_position(alpha)
        k, l = root_position(beta)
        mu = int(g[self.pos(i), self.pos(j)])
        lam = int(g[self.pos(k), self.pos(l)])
        rebuilt = self.matmul(self.root_element(alpha, mu), self.root_element(beta, lam))
        if not np.array_equal(rebuilt, g):
            raise PatternError(f"矩阵不是 x_{alpha}(μ)·x_{beta}(λ) 形状")
        return mu, lam

    # ------------------------------------------------------------------ 分块

    def blocks(self, batch: Matrix) -> Tuple[Matrix, Matrix, Matrix, Matrix]:
        n = self.n
        return batch[..., :n, :n], batch[..., :n, n:], batch[..., n:, :n], batch[..., n:, n:]

    def random_element(self, gens: Sequence[Matrix], rng: np.random.Generator, length: int) -> Matrix:
        """生成元的随机乘积 (由 rng 决定，可复现)"""
        g = self.identity.copy()
        if not gens:
            return g
        for idx in rng.integers(0, len(gens), size=length):
            g = self.matmul(g, gens[int(idx)])
        return g


@lru_cache(maxsize=64)
def get_space(ring: Ring, n: int) -> SymplecticSpace:
    return SymplecticSpace(ring, n)


def space_of(g: Matrix, ring: Ring) -> SymplecticSpace:
    g = np.asarray(g)
    if g.ndim < 2 or g.shape[-1] != g.shape[-2] or g.shape[-1] % 2:
        raise UsageError(f"需要偶数阶方阵，收到形状 {g.shape}")
    return get_space(ring, g.shape[-1] // 2)


# ---------------------------------------------------------------------- 函数式接口

def gram_matrix(n: int, ring: Ring) -> Matrix:
    return get_space(ring, n).gram.copy()


def is_symplectic(g: Matrix, ring: Ring) -> bool:
    g = np.asarray(g, dtype=np.uint8)
    if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] % 2:
        raise UsageError(f"is_symplectic 需要偶数阶方阵，收到形状 {g.shape}")
    return get_space(ring, g.shape[0] // 2).is_symplectic(g)


def transvection(i: int, j: int, xi: int, n: int, ring: Ring) -> Matrix:
    return get_space(ring, n).transvection(i, j, xi)


def root_element(alpha: Root, xi: int, ring: Ring) -> Matrix:
    return get_space(ring, alpha.n).root_element(alpha, xi)


def weyl_element(alpha: Root, ring: Ring, n: int) -> Matrix:
    return get_space(ring, n).weyl_element(alpha)


def symplectic_inverse(g: Matrix) -> Matrix:
    return SymplecticSpace.inverse(g)


@dataclass(frozen=True)
class CommutatorExpansion:
    """[x_α(λ), x_β(μ)] 的预测展开"""
    case: str
    factors: Tuple[Tuple[Root, int], ...]


def chevalley_commutator(alpha: Root, lam: int, beta: Root, mu: int, ring: Ring) -> CommutatorExpansion:
    """按夹角分支给出交换子的因子列表 (特征 2 下符号全部为正)"""
    case = angle_case(alpha, beta)
    total = as_root(alpha.plus(beta))
    if case == 'commute':
        return CommutatorExpansion(case, ())
    lm = ring.mul(lam, mu)
    if case == '2pi/3':
        return CommutatorExpansion(case, ((total, lm),))
    if case == 'pi/2':
        return CommutatorExpansion(case, ((total, lm ^ lm),))
    if case == 'long-short':
        return CommutatorExpansion(case, (
            (total, lm),
            (Root(alpha.plus(beta, 2)), ring.mul(lam, ring.square(mu))),
        ))
    # short-long: [x_α(λ), x_β(μ)] = [x_β(μ), x_α(λ)]⁻¹，两个因子可交换
    return CommutatorExpansion(case, (
        (total, lm),
        (Root(beta.plus(alpha, 2)), ring.mul(ring.square(lam), mu)),
    ))


def evaluate_expansion(expansion: CommutatorExpansion, ring: Ring, n: int) -> Matrix:
    space = get_space(ring, n)
    return space.product(space.root_element(root, xi) for root, xi in expansion.factors)


def star(a: Matrix) -> Matrix:
    """a* = J·ᵀa·J，沿反对角线反射"""
    return np.ascontiguousarray(np.swapaxes(a, -1, -2)[..., ::-1, ::-1])


def _antidiagonal(a: Matrix) -> np.ndarray:
    n = a.shape[-1]
    return a[..., np.arange(n)[::-1], np.arange(n)]


def mn_form_mask(a: Matrix, lam_mask: np.ndarray) -> np.ndarray:
    symmetric = (a == star(a)).all(axis=(-2, -1))
    return symmetric & lam_mask[_antidiagonal(a)].all(axis=-1)


def in_mn_form_param(a: Matrix, lam: FormParameter) -> bool:
    a = np.asarray(a, dtype=np.uint8)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise UsageError(f"需要方阵，收到形状 {a.shape}")
    return bool(mn_form_mask(a, lam.mask()))


def in_min(a: Matrix) -> np.ndarray:
    """Min(R) = M_n(R, 2R)：特征 2 下为反对角对称且反对角线为零的矩阵"""
    return (a == star(a)).all(axis=(-2, -1)) & (_antidiagonal(a) == 0).all(axis=-1)


def equal_mod_min(x: Matrix, y: Matrix) -> bool:
    return bool(in_min(np.asarray(x) ^ np.asarray(y)))


def _block_matmul(ring: Ring, a: Matrix, b: Matrix) -> Matrix:
    return np.bitwise_xor.reduce(ring.table[a[..., :, :, None], b[..., None, :, :]], axis=-2)


def circle_action(a: Matrix, b: Matrix, ring: Ring) -> Matrix:
    """a ∘ b = a·b·a*，代表元不做约化；相等性用 equal_mod_min 判断"""
    return _block_matmul(ring, _block_matmul(ring, a, b), star(a))


def bak_mask(batch: Matrix, fr: FormRing) -> np.ndarray:
    """批量 Bak 判据: 元素属于 R，a*d − c*b = e，c*a 与 d*b ∈ M_n(R,Λ)"""
    ring = fr.ambient
    batch = np.asarray(batch, dtype=np.uint8)
    if batch.ndim == 2:
        batch = batch[None]
    n = batch.shape[-1] // 2
    ok = fr.R.mask()[batch].all(axis=(-2, -1))
    a, b, c, d = batch[..., :n, :n], batch[..., :n, n:], batch[..., n:, :n], batch[..., n:, n:]
    eye = (np.eye(n, dtype=np.uint8) * ring.unit).astype(np.uint8)
    lhs = _block_matmul(ring, star(a), d) ^ _block_matmul(ring, star(c), b)
    ok &= (lhs == eye).all(axis=(-2, -1))
    lam_mask = fr.lam.mask()
    ok &= mn_form_mask(_block_matmul(ring, star(c), a), lam_mask)
    ok &= mn_form_mask(_block_matmul(ring, star(d), b), lam_mask)
    return ok


def in_bak_sp(g: Matrix, fr: FormRing) -> bool:
    return bool(bak_mask(g, fr)[0])


def _require_symplectic(g: Matrix, ring: Ring) -> SymplecticSpace:
    space = space_of(g, ring)
    if not space.is_symplectic(g):
        raise UsageError("抛物子群判定要求输入为辛矩阵")
    return space


def in_p1(g: Matrix, ring: Ring) -> bool:
    """P1: g_i1 = 0 (i ≠ 1) 且 g_{-1,j} = 0 (j ≠ -1)"""
    space = _require_symplectic(g, ring)
    m = space.m
    ok = not g[1:, 0].any() and not g[m - 1, :m - 1].any()
    if ok and g[0, 0] != space.inverse(g)[m - 1, m - 1]:
        raise UsageError("P1 元素不满足 g_11 = (g⁻¹)_{-1,-1}")
    return bool(ok)


def u1_pattern(g: Matrix, space: SymplecticSpace) -> bool:
    diff = g ^ space.identity
    m = space.m
    inner = diff[1:, :m - 1]
    return not inner.any() and g[0, 0] == space.unit and g[m - 1, m - 1] == space.unit


def in_u1(g: Matrix, ring: Ring) -> bool:
    """U1: g − e 只在第 1 行与第 -1 列非零，且对角元为 1"""
    space = _require_symplectic(g, ring)
    return bool(u1_pattern(g, space))


def in_l1(g: Matrix, ring: Ring) -> bool:
    """L1: P1 中满足 g_1i = g_{-i,-1} = 0 (i ≠ 1) 的元素"""
    if not in_p1(g, ring):
        return False
    m = g.shape[0]
    return not g[0, 1:].any() and not g[:m - 1, m - 1].any()


def u1_coordinates(g: Matrix, ring: Ring) -> Dict[int, int]:
    """g = ∏_{j=2}^{-1} T_1j(μ_j) (I 序) 的坐标；μ_{-1} = g_{1,-1} + Σ_k μ_k μ_{-k}"""
    space = space_of(g, ring)
    if not space.is_symplectic(g) or not u1_pattern(g, space):
        raise UsageError("u1_coordinates 要求 g ∈ U1")
    n = space.n
    coords = {j: int(g[0, space.pos(j)]) for j in space.order if j not in (1, -1)}
    long_coord = int(g[0, space.m - 1])
    for k in range(2, n + 1):
        long_coord ^= ring.mul(coords[k], coords[-k])
    coords[-1] = long_coord
    return coords


def u1_from_coordinates(coords: Dict[int, int], ring: Ring, n: int) -> Matrix:
    space = get_space(ring, n)
    return space.product(space.transvection(1, j, coords.get(j, 0))
                         for j in space.order if j != 1)


def ep_generator_labels(fr: FormRing, n: int) -> List[Tuple[Root, int]]:
    """Ep(R,Λ) 生成元标签: 短根配 R∖0，长根配 Λ∖0，按根序再按元素排列"""
    labels = []
    for alpha in enumerate_roots(n):
        scalars = fr.lam.nonzero() if alpha.is_long else fr.R.nonzero()
        labels.extend((alpha, xi) for xi in scalars)
    return labels


def ep_generators(fr: FormRing, n: int) -> List[Matrix]:
    space = get_space(fr.ambient, n)
    return [space.root_element(alpha, xi) for alpha, xi in ep_generator_labels(fr, n)]


def symplectic_group_order(q: int, n: int) -> int:
    """有限域上 |Sp_2n(F_q)| = q^{n²}·∏(q^{2i} − 1)"""
    order = q ** (n * n)
    for i in range(1, n + 1):
        order *= q ** (2 * i) - 1
    return order


def matrix_to_rows(g: Matrix, ring: Ring) -> List[List[str]]:
    """报告格式: 行优先，每个元素写成基坐标位串"""
    return [[ring.bits(int(x)) for x in row] for row in g]


def matrix_from_rows(rows: List[List[str]], ring: Ring) -> Matrix:
    return np.array([[ring.from_bits(x) for x in row] for row in rows], dtype=np.uint8)
