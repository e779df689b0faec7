#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""有界穷举闭包引擎: 成员判定、正规闭包、导出列与水平集

BFS 按层推进；每层前沿切块后用线程池并行扩展，候选按规范编码排序合并，
因此结果与线程数无关。
"""

from concurrent.futures import ThreadPoolExecutor
from itertools import combinations
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence

import numpy as np

from app.core.config import config
from app.core.errors import CapacityError, SandwichError, UsageError
from app.core.logging import get_logger
from app.core.shutdown import bfs_section, check_interrupt, shutdown_event
from app.models.group import (STATUS_COMPLETE, STATUS_INTERRUPTED, STATUS_OVERFLOWED, GroupClosure, Move, Word,
                              inverse_word)
from app.services.roots import Root
from app.services.symplectic import SymplecticSpace

logger = get_logger()

ProgressCallback = Callable[[int, int], None]

ALL_PAIRS_LIMIT = 10_000


class _CompactIndex:
    """uint64 规范键的有序索引"""

    def __init__(self):
        self.keys = np.empty(0, dtype=np.uint64)
        self.positions = np.empty(0, dtype=np.int64)

    def lookup(self, keys: np.ndarray) -> np.ndarray:
        keys = np.asarray(keys, dtype=np.uint64)
        if not len(self.keys):
            return np.full(len(keys), -1, dtype=np.int64)
        at = np.searchsorted(self.keys, keys)
        clipped = np.minimum(at, len(self.keys) - 1)
        hit = self.keys[clipped] == keys
        return np.where(hit, self.positions[clipped], -1)

    def select_new(self, keys: np.ndarray) -> np.ndarray:
        """新键首次出现的位置，按键排序"""
        if not len(keys):
            return np.empty(0, dtype=np.int64)
        uniq, first = np.unique(keys, return_index=True)
        return first[self.lookup(uniq) < 0]

    def add(self, keys: np.ndarray, start: int):
        merged = np.concatenate([self.keys, np.asarray(keys, dtype=np.uint64)])
        positions = np.concatenate([self.positions, np.arange(start, start + len(keys), dtype=np.int64)])
        order = np.argsort(merged, kind='stable')
        self.keys, self.positions = merged[order], positions[order]

    def key_set(self) -> np.ndarray:
        return self.keys


class _BytesIndex:
    """超过 64 位的规范键使用字典索引"""

    def __init__(self):
        self.map: Dict[bytes, int] = {}

    def lookup(self, keys) -> np.ndarray:
        return np.array([self.map.get(k, -1) for k in keys], dtype=np.int64)

    def select_new(self, keys) -> np.ndarray:
        seen: Dict[bytes, int] = {}
        for i, k in enumerate(keys):
            if k not in self.map and k not in seen:
                seen[k] = i
        return np.array([seen[k] for k in sorted(seen)], dtype=np.int64)

    def add(self, keys, start: int):
        for offset, k in enumerate(keys):
            self.map[k] = start + offset

    def key_set(self) -> FrozenSet[bytes]:
        return frozenset(self.map)


def new_key_index(space: SymplecticSpace):
    return _CompactIndex() if space.compact_keys else _BytesIndex()


def evaluate_word(word: Word, generators: Sequence[np.ndarray], space: SymplecticSpace) -> np.ndarray:
    """按生成元表求值字 (从左到右相乘)"""
    g = space.identity.copy()
    for index, exp in word:
        if not 0 <= index < len(generators):
            raise UsageError(f"字引用了不存在的生成元 {index}")
        letter = generators[index] if exp == 1 else space.inverse(generators[index])
        g = space.matmul(g, letter)
    return g


def _is_involution(space: SymplecticSpace, g: np.ndarray) -> bool:
    return space.is_identity(space.matmul(g, g))


def _letter_moves(space: SymplecticSpace, generators: Sequence[np.ndarray], offset: int = 0) -> List[Move]:
    moves = []
    for i, g in enumerate(generators):
        moves.append(Move(((offset + i, 1),)))
        if not _is_involution(space, g):
            moves.append(Move(((offset + i, -1),)))
    return moves


class _MoveAction:
    """Move 的矩阵形式"""

    def __init__(self, space: SymplecticSpace, move: Move, generators: Sequence[np.ndarray]):
        self.space = space
        self.left = evaluate_word(move.left, generators, space) if move.left else None
        self.right = evaluate_word(move.right, generators, space) if move.right else None

    def apply(self, batch: np.ndarray) -> np.ndarray:
        out = batch
        if self.left is not None:
            out = self.space.left_apply(self.left, out)
        if self.right is not None:
            out = self.space.right_apply(out, self.right)
        return out


def _validate_generators(space: SymplecticSpace, generators: Sequence[np.ndarray]):
    for i, g in enumerate(generators):
        g = np.asarray(g)
        if g.shape != (space.m, space.m):
            raise UsageError(f"生成元 {i} 的形状 {g.shape} 与 Sp_{space.m} 不符")
        if not space.is_symplectic(g):
            raise UsageError(f"生成元 {i} 不是辛矩阵")


def _bfs(space: SymplecticSpace, generators: List[np.ndarray], moves: List[Move], cap: int,
         progress: Optional[ProgressCallback] = None,
         group_generators: Optional[List[np.ndarray]] = None) -> GroupClosure:
    if cap < 1:
        raise UsageError(f"容量上限必须至少为 1，收到 {cap}")
    _validate_generators(space, generators)
    actions = [_MoveAction(space, mv, generators) for mv in moves]
    chunk_size = max(1, config.chunk_size)

    index = new_key_index(space)
    layers = [space.identity[None].copy()]
    parents = [np.zeros(1, dtype=np.int64)]
    move_ids = [np.zeros(1, dtype=np.int32)]
    index.add(space.keys(layers[0]), 0)
    total, frontier_start = 1, 0
    status = STATUS_COMPLETE
    depth = 0

    def expand(args):
        start, chunk = args
        keys, parent, which = [], [], []
        for mv_id, action in enumerate(actions):
            out = action.apply(chunk)
            k = space.keys(out)
            keys.append(k)
            parent.append(np.arange(start, start + len(chunk), dtype=np.int64))
            which.append(np.full(len(chunk), mv_id, dtype=np.int32))
        return keys, parent, which

    with bfs_section(), ThreadPoolExecutor(max_workers=max(1, config.max_workers)) as executor:
        while actions and len(layers[-1]):
            if shutdown_event.is_set():
                logger.warning(f"收到中断信号，闭包在 {total} 个元素处停止")
                status = STATUS_INTERRUPTED
                break
            frontier = layers[-1]
            chunks = [(frontier_start + s, frontier[s:s + chunk_size])
                      for s in range(0, len(frontier), chunk_size)]
            cand_keys, cand_parent, cand_move = [], [], []
            for keys, parent, which in executor.map(expand, chunks):
                cand_keys.extend(keys)
                cand_parent.extend(parent)
                cand_move.extend(which)
            if space.compact_keys:
                all_keys = np.concatenate(cand_keys)
            else:
                all_keys = [k for part in cand_keys for k in part]
            all_parent = np.concatenate(cand_parent)
            all_move = np.concatenate(cand_move)

            chosen = index.select_new(all_keys)
            if total + len(chosen) > cap:
                chosen = chosen[:cap - total]
                status = STATUS_OVERFLOWED
            if not len(chosen):
                break

            new_parent = all_parent[chosen]
            new_move = all_move[chosen]
            new_elements = np.empty((len(chosen), space.m, space.m), dtype=np.uint8)
            for mv_id in np.unique(new_move):
                sel = np.flatnonzero(new_move == mv_id)
                new_elements[sel] = actions[int(mv_id)].apply(frontier[new_parent[sel] - frontier_start])
            new_keys = all_keys[chosen] if space.compact_keys else [all_keys[i] for i in chosen]
            index.add(new_keys, total)

            frontier_start = total
            total += len(chosen)
            layers.append(new_elements)
            parents.append(new_parent)
            move_ids.append(new_move)
            depth += 1
            logger.debug(f"BFS 第 {depth} 层: 新增 {len(chosen)}，累计 {total}")
            if progress is not None:
                progress(depth, total)
            if status == STATUS_OVERFLOWED:
                logger.warning(f"闭包超过容量上限 {cap}，已停止")
                break

    return GroupClosure(space, generators, moves, np.concatenate(layers), np.concatenate(parents),
                        np.concatenate(move_ids), status, cap, index, group_generators)


def closure(gens: Sequence[np.ndarray], space: SymplecticSpace, cap: Optional[int] = None,
            progress: Optional[ProgressCallback] = None) -> GroupClosure:
    """生成元左乘 (及非对合生成元的逆) 的 BFS 闭包"""
    generators = [np.asarray(g, dtype=np.uint8) for g in gens]
    cap = config.cap if cap is None else cap
    return _bfs(space, generators, _letter_moves(space, generators), cap, progress, generators)


def contains(G: GroupClosure, g: np.ndarray) -> Optional[bool]:
    return G.contains(g)


def normal_closure(seed: Sequence[np.ndarray], normalizers: Sequence[np.ndarray], space: SymplecticSpace,
                   cap: Optional[int] = None, progress: Optional[ProgressCallback] = None) -> GroupClosure:
    """seed 生成、并对 normalizers 共轭封闭的子群

    BFS 的步为左乘 seed 字母与 z·x·z⁻¹ 共轭；有限群中这些步可达的集合恰为正规闭包。
    字的字母表为 seed + normalizers。
    """
    seed = [np.asarray(g, dtype=np.uint8) for g in seed]
    normalizers = [np.asarray(z, dtype=np.uint8) for z in normalizers]
    generators = seed + normalizers
    moves = _letter_moves(space, seed)
    for k in range(len(normalizers)):
        index = len(seed) + k
        moves.append(Move(((index, 1),), ((index, -1),)))
    cap = config.cap if cap is None else cap
    return _bfs(space, generators, moves, cap, progress)


def _require_complete(G: GroupClosure, what: str):
    if not G.complete:
        raise CapacityError(f"{what} 需要完整枚举的群，但闭包状态为 {G.status}")


def generating_set(G: GroupClosure) -> List[np.ndarray]:
    """G 自身元素组成的生成集

    普通闭包直接取其生成元；否则按 BFS 顺序贪心挑选尚未生成的元素，
    每次加入至少使生成的子群阶数翻倍，因此最多 log2|G| 个。
    """
    if G.group_generators is not None:
        return G.group_generators
    _require_complete(G, "generating_set")
    chosen: List[np.ndarray] = []
    covered = np.zeros(len(G), dtype=bool)
    covered[0] = True
    while not covered.all():
        check_interrupt()
        idx = int(np.flatnonzero(~covered)[0])
        chosen.append(G.elements[idx].copy())
        covered = closure(chosen, G.space, cap=len(G)).contains_mask(G.elements)
    logger.debug(f"{G!r} 的生成集: {len(chosen)} 个元素")
    G.group_generators = chosen
    return chosen


def derived_subgroup(G: GroupClosure, cap: Optional[int] = None) -> GroupClosure:
    """[G, G] = 生成集两两交换子在 G 中的正规闭包 (用同一生成集共轭)"""
    _require_complete(G, "derived_subgroup")
    space = G.space
    gens = generating_set(G)
    seeds, seen = [], set()
    for a, b in combinations(gens, 2):
        c = space.commutator(a, b)
        key = c.tobytes()
        if not space.is_identity(c) and key not in seen:
            seen.add(key)
            seeds.append(c)
    return normal_closure(seeds, gens, space, cap)


def derived_subgroup_all_pairs(G: GroupClosure, cap: Optional[int] = None) -> GroupClosure:
    """按定义由全部元素对的交换子生成 (仅用于小群的交叉验证)"""
    _require_complete(G, "derived_subgroup_all_pairs")
    if len(G) > ALL_PAIRS_LIMIT:
        raise CapacityError(f"全部元素对交换子仅支持 |G| ≤ {ALL_PAIRS_LIMIT}，当前 {len(G)}")
    space = G.space
    elements = G.elements
    inverses = space.inverse(elements)
    found: Dict[bytes, np.ndarray] = {}
    for i in range(len(elements)):
        left = space.matmul(elements[i], elements)
        right = space.matmul(inverses[i], inverses)
        comms = space.matmul(left, right)
        for row in np.unique(space.encode(comms), axis=0):
            found.setdefault(row.tobytes(), row)
    packed = np.array([found[k] for k in sorted(found)], dtype=np.uint8)
    commutators = [c for c in space.decode(packed) if not space.is_identity(c)]
    return closure(commutators, space, cap)


def derived_series(G: GroupClosure, k: int, cap: Optional[int] = None) -> List[GroupClosure]:
    """[G, D(G), D²(G), ...]，长度 k+1；遇到平凡群或完美群提前停止"""
    series = [G]
    for _ in range(k):
        current = series[-1]
        if len(current) == 1:
            break
        nxt = derived_subgroup(current, cap)
        series.append(nxt)
        if not nxt.complete or len(nxt) == len(current):
            break
    return series


def level_set(G: GroupClosure, alpha: Root, check_constancy: bool = True) -> Optional[FrozenSet[int]]:
    """P_α(G) = {t : x_α(t) ∈ G}；闭包溢出时返回 None (未知)"""
    if not G.complete:
        return None
    space = G.space
    level = _level(G, alpha)
    if check_constancy and _contains_prime_ep(G):
        for beta in space.roots:
            if beta.is_long == alpha.is_long and _level(G, beta) != level:
                raise SandwichError(f"水平集在等长根 {alpha} 与 {beta} 上不一致")
    return level


def _level(G: GroupClosure, alpha: Root) -> FrozenSet[int]:
    space = G.space
    batch = np.stack([space.root_element(alpha, t) for t in space.ring.elements()])
    hits = G.contains_mask(batch)
    return frozenset(int(t) for t in np.flatnonzero(hits))


def _contains_prime_ep(G: GroupClosure) -> bool:
    space = G.space
    batch = np.stack([space.root_element(beta, space.unit) for beta in space.roots])
    return bool(G.contains_mask(batch).all())


def level_sets(G: GroupClosure) -> Optional[Dict[Root, FrozenSet[int]]]:
    if not G.complete:
        return None
    return {alpha: _level(G, alpha) for alpha in G.space.roots}


def sample_witnesses(G: GroupClosure, limit: int, rng: np.random.Generator) -> bool:
    """抽查 (|G| ≤ limit 时全量) 见证字求值是否还原元素"""
    if len(G) <= limit:
        indices = range(len(G))
    else:
        indices = sorted(int(i) for i in rng.choice(len(G), size=limit, replace=False))
    for idx in indices:
        value = evaluate_word(G.word(idx), G.generators, G.space)
        if not np.array_equal(value, G.elements[idx]):
            logger.error(f"见证字求值不符: 元素 {idx}")
            return False
    return True
