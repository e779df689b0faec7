#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""群闭包与生成元字数据模型"""

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from app.core.errors import UsageError

Letter = Tuple[int, int]
Word = Tuple[Letter, ...]

STATUS_COMPLETE = 'complete'
STATUS_OVERFLOWED = 'overflowed'
STATUS_INTERRUPTED = 'interrupted'


def make_word(letters: Iterable[Sequence[int]]) -> Word:
    word = []
    for index, exp in letters:
        if exp not in (1, -1):
            raise UsageError(f"字母指数必须为 ±1，收到 {exp}")
        word.append((int(index), int(exp)))
    return tuple(word)


def inverse_word(word: Word) -> Word:
    return tuple((index, -exp) for index, exp in reversed(word))


def reduce_word(word: Word) -> Word:
    """消去相邻的 g·g⁻¹"""
    out: List[Letter] = []
    for letter in word:
        if out and out[-1][0] == letter[0] and out[-1][1] == -letter[1]:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def commutator_word(u: Word, v: Word) -> Word:
    """[u, v] = u·v·u⁻¹·v⁻¹"""
    return reduce_word(u + v + inverse_word(u) + inverse_word(v))


def conjugate_word(g: Word, w: Word) -> Word:
    """g·w·g⁻¹"""
    return reduce_word(g + w + inverse_word(g))


def word_to_list(word: Word) -> List[List[int]]:
    return [[index, exp] for index, exp in word]


@dataclass(frozen=True)
class Move:
    """BFS 的一步: x ↦ left·x·right"""
    left: Word
    right: Word = ()


class GroupClosure:
    """显式枚举的子群，每个元素带有生成元字证书

    generators 是字的字母表；group_generators 是生成该子群的元素 (都属于该子群)。
    两者对普通闭包相同；正规闭包的字母表还包含共轭用的外部元素，
    此时 group_generators 为 None，需要时由引擎计算。
    """

    def __init__(self, space, generators: List[np.ndarray], moves: List[Move],
                 elements: np.ndarray, parents: np.ndarray, move_ids: np.ndarray,
                 status: str, cap: int, index,
                 group_generators: Optional[List[np.ndarray]] = None):
        self.space = space
        self.generators = [np.asarray(g, dtype=np.uint8) for g in generators]
        self.group_generators = group_generators
        self.moves = moves
        self.elements = elements
        self.parents = parents
        self.move_ids = move_ids
        self.status = status
        self.cap = cap
        self._index = index

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"GroupClosure({self.space.ring.name}, n={self.space.n}, size={len(self)}, {self.status})"

    @property
    def complete(self) -> bool:
        return self.status == STATUS_COMPLETE

    def index_of(self, g: np.ndarray) -> int:
        return int(self._index.lookup(self.space.keys(np.asarray(g, dtype=np.uint8)[None]))[0])

    def indices_of(self, batch: np.ndarray) -> np.ndarray:
        return self._index.lookup(self.space.keys(batch))

    def contains(self, g: np.ndarray) -> Optional[bool]:
        """True / False；闭包溢出且未找到时返回 None (未知)"""
        if self.index_of(g) >= 0:
            return True
        return False if self.complete else None

    def contains_mask(self, batch: np.ndarray) -> np.ndarray:
        return self.indices_of(batch) >= 0

    def word(self, idx: int) -> Word:
        lefts, rights = [], []
        while idx != 0:
            move = self.moves[int(self.move_ids[idx])]
            lefts.append(move.left)
            rights.append(move.right)
            idx = int(self.parents[idx])
        word: List[Letter] = []
        for w in lefts:
            word.extend(w)
        for w in reversed(rights):
            word.extend(w)
        return tuple(word)

    def witness(self, g: np.ndarray) -> Optional[Word]:
        idx = self.index_of(g)
        return self.word(idx) if idx >= 0 else None

    def key_set(self) -> Union[np.ndarray, frozenset]:
        return self._index.key_set()

    def same_elements(self, other: 'GroupClosure') -> bool:
        mine, theirs = self.key_set(), other.key_set()
        if isinstance(mine, np.ndarray):
            return bool(len(mine) == len(theirs) and np.array_equal(mine, theirs))
        return mine == theirs

    def iter_chunks(self, size: int):
        for start in range(0, len(self.elements), size):
            yield start, self.elements[start:start + size]
