#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""闭包缓存: 规范编码 + 见证字结构的 .npz 持久化"""

import hashlib
import json
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from app.core.config import CACHE_DIR, ensure_dirs
from app.core.errors import UsageError
from app.core.logging import get_logger
from app.models.group import GroupClosure, Move, make_word, word_to_list
from app.models.ring import RingSpec
from app.services.group_engine import new_key_index
from app.services.ring_core import ring_from_spec
from app.services.symplectic import SymplecticSpace, get_space

logger = get_logger()

CACHE_VERSION = 1


def generator_hash(space: SymplecticSpace, generators: Sequence[np.ndarray]) -> str:
    digest = hashlib.sha256()
    digest.update(f"{space.ring.name}|n={space.n}|count={len(generators)}".encode('utf-8'))
    if generators:
        digest.update(space.encode(np.stack(generators)).tobytes())
    return digest.hexdigest()


def cache_path(space: SymplecticSpace, generators: Sequence[np.ndarray], tag: str = 'closure') -> Path:
    ensure_dirs()
    short = generator_hash(space, generators)[:16]
    return CACHE_DIR / f"{tag}_{space.ring.name}_n{space.n}_{short}.npz"


def save_closure(G: GroupClosure, path: Path) -> Path:
    """保存闭包；头部记录版本、环、秩与生成元哈希"""
    space = G.space
    spec = space.ring.spec
    header = {
        'version': CACHE_VERSION,
        'ring': space.ring.name,
        'ring_spec': spec.to_dict() if spec else None,
        'n': space.n,
        'generator_hash': generator_hash(space, G.generators),
        'status': G.status,
        'cap': G.cap,
        'size': len(G),
        'moves': [[word_to_list(mv.left), word_to_list(mv.right)] for mv in G.moves],
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    generators = np.stack(G.generators) if G.generators else np.zeros((0, space.m, space.m), dtype=np.uint8)
    with open(path, 'wb') as f:
        np.savez_compressed(
            f,
            header=np.array(json.dumps(header, sort_keys=True)),
            generators=space.encode(generators) if len(generators) else np.zeros((0, space.key_bytes), np.uint8),
            encodings=space.encode(G.elements),
            parents=G.parents,
            move_ids=G.move_ids,
        )
    logger.info(f"闭包缓存已保存: {path} ({len(G)} 个元素)")
    return path


def load_closure(path: Path, expected_hash: Optional[str] = None) -> Optional[GroupClosure]:
    """读取缓存；生成元哈希不符时返回 None"""
    path = Path(path)
    if not path.exists():
        return None
    with np.load(path, allow_pickle=False) as data:
        header = json.loads(str(data['header']))
        if header.get('version') != CACHE_VERSION:
            raise UsageError(f"缓存版本 {header.get('version')} 不受支持: {path}")
        if expected_hash is not None and header['generator_hash'] != expected_hash:
            logger.debug(f"缓存生成元哈希不符，忽略: {path}")
            return None
        if header.get('ring_spec') is None:
            raise UsageError(f"缓存缺少环定义: {path}")
        ring = ring_from_spec(RingSpec.from_dict(header['ring_spec']))
        space = get_space(ring, header['n'])
        packed_gens = data['generators']
        generators = list(space.decode(packed_gens)) if len(packed_gens) else []
        encodings = data['encodings']
        elements = space.decode(encodings)
        parents = data['parents'].astype(np.int64)
        move_ids = data['move_ids'].astype(np.int32)
    moves = [Move(make_word(left), make_word(right)) for left, right in header['moves']]
    index = new_key_index(space)
    index.add(space.keys(elements), 0)
    G = GroupClosure(space, generators, moves, elements, parents, move_ids,
                     header['status'], header['cap'], index)
    if generator_hash(space, G.generators) != header['generator_hash']:
        raise UsageError(f"缓存内容与头部哈希不一致: {path}")
    logger.debug(f"读取闭包缓存 {path}: {len(G)} 个元素")
    return G
