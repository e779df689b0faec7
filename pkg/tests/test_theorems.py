# -*- coding: utf-8 -*-
"""性质校验套件测试"""

import numpy as np
import pytest

from app.core.config import config
from app.core.errors import SandwichError
from app.models.report import CHECK_FAIL, CHECK_PASS, CHECK_SKIP
from app.services.ring_core import make_form_ring
from app.services.roots import parse_root
from app.services.symplectic import get_space
from app.services.theorems import (closure_order_suite, commutator_suite, entry_product_suite, enumerate_sp,
                                   full_form_ring, identity_suite, membership_suite, normalizer_oracle_suite,
                                   nsofgu_suite, p1_generators, perfectness_suite, run_suite,
                                   small_unipotent_identity, unit_form_rings, verify_ep_generation_from_p1,
                                   verify_theorem2, weyl_suite, zero_form_ring)


@pytest.fixture(scope="module")
def sp4(catalog):
    return enumerate_sp(catalog.ring("F2"), 2)


@pytest.fixture
def small_samples(monkeypatch):
    monkeypatch.setitem(config.verify, "pair_samples", 500)
    monkeypatch.setitem(config.verify, "full_sweep_limit", 100)


def _all_pass(results):
    return all(r.status == CHECK_PASS for r in results)


@pytest.mark.parametrize("name", ["F2", "F2eps"])
def test_commutator_suite(catalog, name):
    result = commutator_suite(catalog.ring(name), 3)
    assert result.status == CHECK_PASS, result.detail
    assert result.data["cases"] > 0


def test_weyl_suite(F2eps):
    result = weyl_suite(F2eps, 3)
    assert result.status == CHECK_PASS, result.detail


def test_unit_form_rings(F2eps):
    rings = unit_form_rings(F2eps)
    assert rings
    assert all(fr.has_unit_param for fr in rings)


def test_membership_over_f2(F2, sp4):
    results = membership_suite(F2, 2, sp4)
    assert len(results) == len(unit_form_rings(F2))
    assert _all_pass(results)
    assert results[0].data["order"] == 720


def test_normalizer_oracle_over_f2(F2, sp4):
    results = normalizer_oracle_suite(F2, 2, sp4)
    assert _all_pass(results), [r.detail for r in results]
    assert results[0].data["normalizer_order"] == 720


def test_membership_skips_on_overflow(F2):
    sp = enumerate_sp(F2, 2, cap=50)
    (result,) = membership_suite(F2, 2, sp)
    assert result.status == CHECK_SKIP
    assert result.data["cap"] == 50


def test_theorem2_prime_field(F2, sp4, small_samples):
    results = verify_theorem2(full_form_ring(F2), F2, 2, sp4, np.random.default_rng(1))
    assert [r.name.split("[")[0] for r in results] == ["theorem2.1", "theorem2.2", "theorem2.3"]
    assert _all_pass(results), [r.detail for r in results]
    assert results[1].data == {"pairs": 500, "mode": "sampled"}
    assert results[2].data["mode"] == "sampled"


@pytest.mark.slow
def test_theorem2_prime_field_exhaustive(F2, sp4, monkeypatch):
    monkeypatch.setitem(config.verify, "full_sweep_limit", 1000)
    results = verify_theorem2(full_form_ring(F2), F2, 2, sp4, np.random.default_rng(1))
    assert _all_pass(results), [r.detail for r in results]
    assert results[1].data == {"pairs": 720 * 720, "mode": "full"}
    assert results[2].data == {"pairs": 720 * 720, "mode": "full"}


def test_theorem2_rejects_foreign_form_ring(F2, F2eps):
    with pytest.raises(SandwichError):
        verify_theorem2(full_form_ring(F2eps), F2, 2)


def test_entry_products(F2, sp4):
    result = entry_product_suite(full_form_ring(F2), 2, sp4)
    assert result.status == CHECK_PASS
    assert result.data["checked"] == 720


def test_p1_generators(F2eps, eps):
    fr = make_form_ring(F2eps, [eps])
    gens = p1_generators(fr, 2)
    # i ∈ {2, -2}，每个 μ ∈ R∖0 两个方向，另加 Λ∖0 上的两个长根方向
    assert len(gens) == 2 * 2 * 3 + 2 * 1


def test_ep_generation_from_p1(F2):
    result = verify_ep_generation_from_p1(full_form_ring(F2), 2)
    assert result.status == CHECK_PASS
    assert result.data["order"] == 720


def test_ep_generation_from_p1_zero_parameter(F2):
    result = verify_ep_generation_from_p1(zero_form_ring(F2), 2)
    assert result.status == CHECK_PASS


def test_nsofgu_prime_field_rank_two(F2):
    results = nsofgu_suite(full_form_ring(F2), 2)
    assert len(results) == 2
    assert _all_pass(results)


def test_closure_order_matches_formula(F2):
    result = closure_order_suite(F2, 2)
    assert result.status == CHECK_PASS
    assert result.data == {"order": 720, "formula": 720}


def test_perfectness_rank_two_records_index(F2):
    result = perfectness_suite(F2, 2)
    assert result.status == CHECK_PASS
    assert result.data["index"] == 2


def test_small_unipotent_identity_trivial_conjugator(F2eps, eps):
    space = get_space(F2eps, 3)
    h = space.transvection(1, 2, eps)
    assert small_unipotent_identity(space.identity, h, parse_root("2e1", 3), F2eps)


def test_identity_suite(F2eps):
    results = identity_suite(F2eps, 3, trials=5, rng=np.random.default_rng(3))
    assert results[0].status == CHECK_PASS
    assert results[1].data["searched"] == 1


def test_run_suite_unknown_name(catalog):
    with pytest.raises(SandwichError):
        run_suite("nope", catalog)


def test_run_suite_commutator(catalog):
    results = run_suite("commutator", catalog)
    assert len(results) == 2 * len(config.commutator_rings)
    assert not any(r.status == CHECK_FAIL for r in results)


@pytest.mark.slow
@pytest.mark.parametrize("name", ["F2eps", "F4"])
def test_membership_and_oracle(catalog, name):
    A = catalog.ring(name)
    sp = enumerate_sp(A, 2)
    assert sp.complete
    assert _all_pass(membership_suite(A, 2, sp))
    assert _all_pass(normalizer_oracle_suite(A, 2, sp))


@pytest.mark.slow
def test_theorem2_dual_numbers(F2eps, eps):
    sp = enumerate_sp(F2eps, 2)
    for fr in (full_form_ring(F2eps), make_form_ring(F2eps), make_form_ring(F2eps, [eps])):
        results = verify_theorem2(fr, F2eps, 2, sp, np.random.default_rng(5))
        assert _all_pass(results), [r.detail for r in results]
        assert entry_product_suite(fr, 2, sp).status == CHECK_PASS


@pytest.mark.slow
def test_lemmas_rank_three(F2):
    assert verify_ep_generation_from_p1(full_form_ring(F2), 3).status == CHECK_PASS
    assert _all_pass(nsofgu_suite(full_form_ring(F2), 3))
    assert perfectness_suite(F2, 3).data["index"] == 1
