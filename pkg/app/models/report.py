#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""分类与校验结果数据模型"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from app.core.errors import UsageError
from app.models.group import Word, word_to_list
from app.models.ring import FormRing, Ring, Subring

STATUS_CERTIFIED = 'certified'
STATUS_INCONCLUSIVE = 'inconclusive'

CHECK_PASS = 'pass'
CHECK_FAIL = 'fail'
CHECK_SKIP = 'skip'


@dataclass
class SubgroupInput:
    """H = ⟨Ep(K) ∪ extra_gens⟩ ≤ Sp_2n(A)"""
    ambient: Ring
    K: Subring
    n: int
    extra_gens: List[np.ndarray] = field(default_factory=list)
    extra_specs: List[str] = field(default_factory=list)

    def __post_init__(self):
        if self.K.parent != self.ambient:
            raise UsageError("K 必须是 A 的子环")
        if self.n < 2:
            raise UsageError(f"秩 n 至少为 2，收到 {self.n}")
        from app.services.symplectic import get_space
        space = get_space(self.ambient, self.n)
        gens = []
        for i, g in enumerate(self.extra_gens):
            g = np.asarray(g, dtype=np.uint8)
            if g.shape != (space.m, space.m) or not space.is_symplectic(g):
                raise UsageError(f"额外生成元 {i} 不是 Sp_{space.m}({self.ambient.name}) 的元素")
            gens.append(g)
        self.extra_gens = gens


@dataclass
class LevelCert:
    """x_α(t) ∈ H 的字证书"""
    root: Any
    scalar: int
    word: Word

    def to_dict(self, ring: Ring) -> dict:
        return {'root': self.root.label(), 'kind': self.root.kind, 'scalar': ring.bits(self.scalar),
                'word': word_to_list(self.word)}


@dataclass
class Harvest:
    """短根/长根水平元素及其字 (分别针对基根 ε1−ε2 与 2ε1)"""
    short_levels: Dict[int, Word]
    long_levels: Dict[int, Word]
    depth_used: int
    generators: List[np.ndarray] = field(default_factory=list)


@dataclass
class SandwichReport:
    form_ring: Optional[FormRing]
    lower_certs: List[LevelCert]
    upper_checks: List[List[bool]]
    uniqueness: str
    uniqueness_reason: str
    status: str
    generators: List[np.ndarray]
    depth_used: int
    exploratory: bool = False
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.status == STATUS_CERTIFIED


@dataclass
class CheckResult:
    """单项性质校验结果"""
    name: str
    status: str
    detail: str = ''
    data: Dict[str, Any] = field(default_factory=dict)
    counterexample: Optional[Dict[str, Any]] = None

    @property
    def passed(self) -> bool:
        return self.status == CHECK_PASS

    @property
    def capacity_skip(self) -> bool:
        """因闭包超过容量上限而跳过 (data 中带有 cap)"""
        return self.status == CHECK_SKIP and 'cap' in self.data

    def to_dict(self) -> dict:
        out = {'name': self.name, 'status': self.status, 'detail': self.detail}
        if self.data:
            out['data'] = self.data
        if self.counterexample is not None:
            out['counterexample'] = self.counterexample
        return out
