# -*- coding: utf-8 -*-
"""闭包缓存测试"""

import numpy as np

from app.services.closure_cache import generator_hash, load_closure, save_closure
from app.services.group_engine import closure, evaluate_word
from app.services.ring_core import make_form_ring
from app.services.symplectic import ep_generators, get_space


def test_round_trip(tmp_path, F2eps, eps):
    space = get_space(F2eps, 2)
    gens = ep_generators(make_form_ring(F2eps), 2) + [space.transvection(1, 2, eps)]
    G = closure(gens, space, cap=5000)
    path = save_closure(G, tmp_path / "g.npz")

    loaded = load_closure(path)
    assert loaded is not None
    assert len(loaded) == len(G)
    assert loaded.status == G.status
    assert np.array_equal(loaded.elements, G.elements)
    assert loaded.same_elements(G)
    idx = len(G) - 1
    assert np.array_equal(evaluate_word(loaded.word(idx), loaded.generators, loaded.space), G.elements[idx])


def test_hash_mismatch_ignored(tmp_path, F2):
    space = get_space(F2, 2)
    G = closure(ep_generators(make_form_ring(F2), 2), space)
    path = save_closure(G, tmp_path / "g.npz")
    assert load_closure(path, expected_hash="0" * 64) is None
    assert load_closure(path, expected_hash=generator_hash(space, G.generators)) is not None


def test_missing_file(tmp_path):
    assert load_closure(tmp_path / "none.npz") is None
