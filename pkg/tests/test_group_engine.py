# -*- coding: utf-8 -*-
"""闭包引擎测试"""

import numpy as np
import pytest

from app.core.errors import CapacityError, UsageError
from app.core.shutdown import shutdown_event
from app.models.group import STATUS_INTERRUPTED, commutator_word, inverse_word, make_word, reduce_word
from app.services.group_engine import (closure, derived_series, derived_subgroup, derived_subgroup_all_pairs,
                                       evaluate_word, generating_set, level_set, level_sets, normal_closure,
                                       sample_witnesses)
from app.services.ring_core import make_form_ring
from app.services.roots import parse_root
from app.services.symplectic import ep_generators, get_space
from app.services.theorems import full_form_ring


@pytest.fixture(scope="module")
def sp4(catalog):
    F2 = catalog.ring("F2")
    return closure(ep_generators(full_form_ring(F2), 2), get_space(F2, 2))


def test_sp4_f2_order(sp4):
    assert sp4.complete
    assert len(sp4) == 720


def test_empty_generators_give_trivial_group(F2):
    G = closure([], get_space(F2, 2))
    assert len(G) == 1
    assert G.complete


def test_cap_marks_overflow(F2):
    G = closure(ep_generators(full_form_ring(F2), 2), get_space(F2, 2), cap=100)
    assert G.status == "overflowed"
    assert len(G) == 100
    assert G.contains(G.elements[50])


def test_witness_words_evaluate(sp4, rng):
    assert sample_witnesses(sp4, 1000, rng)
    g = sp4.elements[-1]
    assert np.array_equal(evaluate_word(sp4.witness(g), sp4.generators, sp4.space), g)


def test_non_member(F2eps, eps):
    space = get_space(F2eps, 2)
    G = closure(ep_generators(make_form_ring(F2eps), 2), space)
    assert len(G) == 720
    assert G.contains(space.transvection(1, 2, eps)) is False
    assert G.witness(space.transvection(1, 2, eps)) is None


def test_non_symplectic_generator_rejected(F2):
    g = np.eye(4, dtype=np.uint8)
    g[0, 1] = 1
    with pytest.raises(UsageError):
        closure([g], get_space(F2, 2))


def test_closure_independent_of_thread_count(F2, monkeypatch):
    from app.core.config import config
    gens = ep_generators(full_form_ring(F2), 2)
    space = get_space(F2, 2)
    monkeypatch.setitem(config.engine, "max_workers", 1)
    monkeypatch.setitem(config.engine, "chunk_size", 7)
    one = closure(gens, space)
    monkeypatch.setitem(config.engine, "max_workers", 4)
    many = closure(gens, space)
    assert np.array_equal(one.elements, many.elements)
    assert np.array_equal(one.parents, many.parents)


def test_derived_subgroup(sp4):
    D = derived_subgroup(sp4)
    assert len(D) == 360
    assert D.same_elements(derived_subgroup_all_pairs(sp4))


def test_derived_series_stops_at_perfect_group(sp4):
    series = derived_series(sp4, 3)
    assert [len(G) for G in series] == [720, 360, 360]


@pytest.fixture(scope="module")
def borel_unipotent(F2):
    """Sp_4(F2) 的 Sylow 2-子群 (正根元素生成，16 阶，可解)"""
    space = get_space(F2, 2)
    gens = [space.transvection(1, 2, 1), space.transvection(1, -2, 1),
            space.transvection(1, -1, 1), space.transvection(2, -2, 1)]
    return closure(gens, space)


def test_derived_series_of_solvable_group(borel_unipotent):
    series = derived_series(borel_unipotent, 4)
    assert [len(G) for G in series] == [16, 2, 1]
    for current, nxt in zip(series, series[1:]):
        assert nxt.same_elements(derived_subgroup_all_pairs(current))


def test_derived_subgroup_of_normal_closure(sp4):
    space = sp4.space
    # 共轭元素取自整个 Sp_4(F2)，大多不在正规闭包里
    N = normal_closure([space.transvection(1, -1, 1)], [space.transvection(2, 1, 1)], space)
    assert N.group_generators is None
    assert N.same_elements(closure(generating_set(N), space))
    assert derived_subgroup(N).same_elements(derived_subgroup_all_pairs(N))


def test_generating_set_lies_in_group(sp4):
    N = normal_closure([sp4.space.transvection(1, 2, 1)], sp4.generators, sp4.space)
    gens = generating_set(N)
    assert gens and N.contains_mask(np.stack(gens)).all()
    assert len(gens) <= 10
    assert generating_set(N) is gens


def test_derived_subgroup_requires_complete_closure(F2):
    G = closure(ep_generators(full_form_ring(F2), 2), get_space(F2, 2), cap=10)
    with pytest.raises(CapacityError):
        derived_subgroup(G)


def test_normal_closure_of_transvection(sp4):
    space = sp4.space
    N = normal_closure([space.transvection(1, 2, 1)], sp4.generators, space)
    assert len(N) == 720


def test_interrupted_closure_is_not_overflowed(F2):
    shutdown_event.set()
    try:
        G = closure(ep_generators(full_form_ring(F2), 2), get_space(F2, 2))
    finally:
        shutdown_event.clear()
    assert G.status == STATUS_INTERRUPTED
    assert not G.complete
    assert len(G) == 1


def test_level_sets(F2eps, eps):
    space = get_space(F2eps, 2)
    G = closure(ep_generators(make_form_ring(F2eps), 2), space)
    assert level_set(G, parse_root("e1-e2", 2)) == frozenset({0, F2eps.unit})
    levels = level_sets(G)
    assert all(levels[alpha] == frozenset({0, F2eps.unit}) for alpha in space.roots)


def test_level_set_unknown_for_overflowed_closure(F2):
    space = get_space(F2, 2)
    gens = ep_generators(full_form_ring(F2), 2)
    G = closure(gens, space, cap=40)
    assert level_set(G, parse_root("e1-e2", 2)) is None


def test_word_helpers(F2, rng):
    space = get_space(F2, 2)
    gens = ep_generators(full_form_ring(F2), 2)
    u = make_word([(0, 1), (3, -1)])
    v = make_word([(5, 1)])
    assert reduce_word(u + inverse_word(u)) == ()
    c = evaluate_word(commutator_word(u, v), gens, space)
    assert np.array_equal(c, space.commutator(evaluate_word(u, gens, space), evaluate_word(v, gens, space)))
    with pytest.raises(UsageError):
        make_word([(0, 2)])
    with pytest.raises(UsageError):
        evaluate_word(((99, 1),), gens, space)


@pytest.mark.slow
def test_sp6_f2_order(F2):
    G = closure(ep_generators(full_form_ring(F2), 3), get_space(F2, 3))
    assert G.complete
    assert len(G) == 1451520
