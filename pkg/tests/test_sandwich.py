# -*- coding: utf-8 -*-
"""夹层分类器测试"""

import copy

import numpy as np
import pytest

from app.core.config import config
from app.core.errors import RankError, UnsupportedError, UsageError
from app.models.report import CHECK_FAIL, CHECK_PASS, LevelCert, SubgroupInput
from app.services.group_engine import evaluate_word
from app.services.ring_core import enumerate_form_rings, make_form_ring, subring_generated, whole_ring
from app.services.roots import parse_root
from app.services.sandwich import (UNIQUENESS_VIOLATED, Harvester, LetterBook, check_certificates, classify,
                                   entry_product_ring, harvest_levels, normalizer_table, normalizes,
                                   random_subgroup_input, recheck_report, u1_factorize, uncouple)
from app.services.symplectic import ep_generators, get_space, u1_from_coordinates
from app.services.theorems import classify_fixed_points, classify_random_suite
from app.utils.report_writer import generators_to_rows, new_document, sandwich_to_dict


@pytest.fixture(scope="module")
def t12_eps_report(catalog):
    """H = ⟨Ep_6(F2), T12(ε)⟩ ≤ Sp_6(F2[ε])"""
    A = catalog.ring("F2eps")
    space = get_space(A, 3)
    K = subring_generated(A, [])
    inp = SubgroupInput(A, K, 3, [space.transvection(1, 2, A.parse("eps"))], ["T[1,2]=eps"])
    return inp, classify(inp)


def test_letter_book_transport(F2eps, prime):
    space = get_space(F2eps, 3)
    book = LetterBook(space, prime(F2eps))
    for alpha in space.roots:
        base = book.base_of(alpha)
        moved = book.evaluate(book.transport(book.letter(alpha), alpha, base))
        assert np.array_equal(moved, space.root_element(base, F2eps.unit))
        back = book.evaluate(book.transport(book.letter(base), base, alpha))
        assert np.array_equal(back, space.root_element(alpha, F2eps.unit))


def test_letter_book_rejects_scalar_outside_k(F2eps, eps, prime):
    book = LetterBook(get_space(F2eps, 3), prime(F2eps))
    with pytest.raises(UsageError):
        book.letter(parse_root("e1-e2", 3), eps)


def test_uncouple_short_long_pair(F2eps, eps):
    space = get_space(F2eps, 3)
    alpha, beta = parse_root("e1-e2", 3), parse_root("2e3", 3)
    g = space.matmul(space.transvection(1, 2, eps), space.transvection(3, -3, F2eps.unit))
    mu, lam, (short_word, long_word) = uncouple(g, alpha, beta, F2eps)
    assert (mu, lam) == (eps, F2eps.unit)
    book = LetterBook(space, subring_generated(F2eps, []), [g])
    assert np.array_equal(book.evaluate(short_word), space.root_element(alpha, eps))
    assert np.array_equal(book.evaluate(long_word), space.root_element(beta, F2eps.unit))


def test_uncouple_needs_rank_three(F2eps, eps):
    space = get_space(F2eps, 2)
    g = space.matmul(space.transvection(1, 2, eps), space.transvection(2, -2, F2eps.unit))
    with pytest.raises(RankError):
        uncouple(g, parse_root("e1-e2", 2), parse_root("2e2", 2), F2eps)


def test_u1_factorize(F2eps, eps):
    g = u1_from_coordinates({2: eps, 3: eps}, F2eps, 3)
    coords, words = u1_factorize(g, F2eps)
    assert coords[2] == eps and coords[3] == eps and coords[-1] == 0
    assert set(words) == {2, 3}
    space = get_space(F2eps, 3)
    book = LetterBook(space, subring_generated(F2eps, []), [g])
    for j, word in words.items():
        assert np.array_equal(book.evaluate(word), space.transvection(1, j, coords[j]))


def test_u1_factorize_rejects_non_u1(F2):
    with pytest.raises(UsageError):
        u1_factorize(get_space(F2, 3).transvection(2, 1, 1), F2)


def test_entry_product_ring(F2eps, eps, prime):
    space = get_space(F2eps, 3)
    K = prime(F2eps)
    assert len(entry_product_ring([space.transvection(1, 2, F2eps.unit)], K)) == 2
    assert len(entry_product_ring([space.transvection(1, 2, eps)], K)) == 4


def test_harvest_levels_collects_short_level(F2eps, eps, prime):
    space = get_space(F2eps, 3)
    inp = SubgroupInput(F2eps, prime(F2eps), 3, [space.transvection(1, 2, eps)])
    harvest = harvest_levels(inp, depth=0)
    assert eps in harvest.short_levels
    assert set(harvest.long_levels) == {0, F2eps.unit}
    book = LetterBook(space, inp.K, inp.extra_gens)
    for t, word in harvest.short_levels.items():
        assert np.array_equal(book.evaluate(word), space.root_element(book.short_base, t))


def test_harvest_levels_rank_error(F2eps, prime):
    with pytest.raises(RankError):
        harvest_levels(SubgroupInput(F2eps, prime(F2eps), 2))


@pytest.mark.parametrize("ring_name, letter", [("F2eps", "eps"), ("F2t3", "t")])
def test_harvest_grows_with_depth(catalog, prime, ring_name, letter):
    A = catalog.ring(ring_name)
    space = get_space(A, 3)
    inp = SubgroupInput(A, prime(A), 3, [space.transvection(1, 2, A.parse(letter))])
    previous = None
    for depth in range(4):
        harvest = harvest_levels(inp, depth=depth)
        if previous is not None:
            assert set(previous.short_levels) <= set(harvest.short_levels)
            assert set(previous.long_levels) <= set(harvest.long_levels)
        previous = harvest


def test_close_levels_products(F2t3, prime):
    space = get_space(F2t3, 3)
    book = LetterBook(space, prime(F2t3), [space.transvection(1, 2, F2t3.parse("t"))])
    harvester = Harvester(book)
    harvester.deepen(0)
    t2 = F2t3.parse("t2")
    assert t2 in harvester.short
    word = harvester.word_for(parse_root("e2-e3", 3), t2)
    assert np.array_equal(book.evaluate(word), space.transvection(2, 3, t2))


def test_normalizes_examples(F2eps, eps):
    space = get_space(F2eps, 3)
    prime_fr = make_form_ring(F2eps)
    dual_fr = make_form_ring(F2eps, [eps])
    assert normalizes(space.identity, prime_fr, 3)
    assert normalizes(space.transvection(1, 2, F2eps.unit), prime_fr, 3)
    assert not normalizes(space.transvection(1, 2, eps), prime_fr, 3)
    assert normalizes(space.transvection(1, 2, eps), dual_fr, 3)
    assert not normalizes(space.transvection(1, -1, eps), dual_fr, 3)


def test_normalizer_table_shape(F2eps, eps):
    space = get_space(F2eps, 3)
    fr = make_form_ring(F2eps, [eps])
    table = normalizer_table([space.identity, space.transvection(1, -1, eps)], fr, 3)
    assert table.shape == (2, len(ep_generators(fr, 3)))
    assert table[0].all()
    assert not table[1].all()


def test_normalizes_requires_unit_in_lambda(F2eps):
    whole = whole_ring(F2eps)
    fr = next(fr for fr in enumerate_form_rings(F2eps) if fr.R == whole and not fr.has_unit_param)
    with pytest.raises(UnsupportedError):
        normalizes(get_space(F2eps, 3).identity, fr, 3)


def test_classify_prime_field_fixed_point(F2):
    K = subring_generated(F2, [])
    report = classify(SubgroupInput(F2, K, 3))
    assert report.certified
    assert report.depth_used == 0
    assert len(report.form_ring.R) == 2 and len(report.form_ring.lam) == 2
    assert report.uniqueness == "verified"


def test_classify_short_dual_transvection(t12_eps_report, eps):
    inp, report = t12_eps_report
    assert report.certified
    fr = report.form_ring
    assert fr.R.elements == frozenset({0, 1, eps, eps ^ 1})
    assert fr.lam.elements == frozenset({0, 1})
    assert report.uniqueness != UNIQUENESS_VIOLATED
    assert len(report.lower_certs) == len(ep_generators(fr, 3))
    assert all(all(row) for row in report.upper_checks)
    space = get_space(inp.ambient, 3)
    assert check_certificates(report.lower_certs, report.generators, space) == []


def test_check_certificates_flags_wrong_word(t12_eps_report):
    inp, report = t12_eps_report
    cert = report.lower_certs[0]
    forged = LevelCert(cert.root, cert.scalar, cert.word + ((0, 1),))
    space = get_space(inp.ambient, 3)
    assert check_certificates([forged], report.generators, space) == [forged]


def test_classify_rejects_rank_two(F2eps, prime):
    with pytest.raises(RankError):
        classify(SubgroupInput(F2eps, prime(F2eps), 2))


def test_classify_exploratory_rank_two(F2eps, eps, prime):
    space = get_space(F2eps, 2)
    inp = SubgroupInput(F2eps, prime(F2eps), 2, [space.transvection(1, 2, eps)])
    report = classify(inp, max_depth=0, exploratory=True, check_uniqueness=False)
    assert report.exploratory
    assert report.form_ring is not None


def test_subgroup_input_rejects_non_symplectic(F2, prime):
    g = np.eye(6, dtype=np.uint8)
    g[0, 1] = 1
    with pytest.raises(UsageError):
        SubgroupInput(F2, prime(F2), 3, [g])


def test_random_subgroup_input_is_seeded(F2eps, prime):
    K = prime(F2eps)
    a = random_subgroup_input(F2eps, K, 3, np.random.default_rng(7), count=2)
    b = random_subgroup_input(F2eps, K, 3, np.random.default_rng(7), count=2)
    assert all(np.array_equal(x, y) for x, y in zip(a.extra_gens, b.extra_gens))


def test_random_subgroup_input_uses_short_words(F2eps, prime, monkeypatch):
    monkeypatch.setitem(config.verify, "classify_word_length", 3)
    inp = random_subgroup_input(F2eps, prime(F2eps), 3, np.random.default_rng(11), count=40)
    lengths = {int(spec.split(":")[1]) for spec in inp.extra_specs}
    assert lengths <= {1, 2, 3}
    assert len(lengths) > 1


def _document(inp, report):
    document = new_document("classify", {"ring": inp.ambient.name}, inp.ambient, inp.n)
    document["generators"] = generators_to_rows(report.generators, inp.ambient)
    document["result"] = sandwich_to_dict(report, inp.ambient, inp.n)
    return document


def test_recheck_report(t12_eps_report):
    document = _document(*t12_eps_report)
    results = recheck_report(document)
    assert [r.name for r in results] == ["form_ring", "lower_certificates", "upper_checks"]
    assert all(r.status == CHECK_PASS for r in results)


def test_recheck_detects_tampered_word(t12_eps_report):
    document = copy.deepcopy(_document(*t12_eps_report))
    document["result"]["lower_certificates"][0]["word"].append([0, 1])
    _, lower, upper = recheck_report(document)
    assert lower.status == CHECK_FAIL
    assert upper.status == CHECK_PASS


def test_recheck_detects_tampered_table(t12_eps_report):
    document = copy.deepcopy(_document(*t12_eps_report))
    document["result"]["upper_checks"]["table"][0][0] = False
    _, _, upper = recheck_report(document)
    assert upper.status == CHECK_FAIL


def test_recheck_requires_every_certificate(t12_eps_report):
    document = copy.deepcopy(_document(*t12_eps_report))
    certs = document["result"]["lower_certificates"]
    assert len(certs) == 42
    del certs[1:]
    _, lower, _ = recheck_report(document)
    assert lower.status == CHECK_FAIL
    assert len(lower.counterexample["missing"]) == 41


def test_recheck_rejects_duplicate_certificate(t12_eps_report):
    document = copy.deepcopy(_document(*t12_eps_report))
    certs = document["result"]["lower_certificates"]
    certs.append(copy.deepcopy(certs[0]))
    _, lower, _ = recheck_report(document)
    assert lower.status == CHECK_FAIL
    assert lower.counterexample["surplus"]


@pytest.mark.parametrize("field, elements", [
    ("R", ["00", "01"]),
    ("Lambda", ["00", "10", "01"]),
])
def test_recheck_rejects_invalid_form_ring(t12_eps_report, field, elements):
    document = copy.deepcopy(_document(*t12_eps_report))
    document["result"]["form_ring"][field]["elements"] = elements
    results = recheck_report(document)
    assert [r.name for r in results] == ["form_ring"]
    assert results[0].status == CHECK_FAIL


def test_recheck_table_shape_mismatch_fails(t12_eps_report):
    document = copy.deepcopy(_document(*t12_eps_report))
    document["result"]["upper_checks"]["table"][0].pop()
    _, _, upper = recheck_report(document)
    assert upper.status == CHECK_FAIL


def test_recheck_does_not_use_classifier_table(t12_eps_report, monkeypatch):
    def fail(*args, **kwargs):
        raise AssertionError("recheck must recompute the table itself")

    monkeypatch.setattr("app.services.sandwich.normalizer_table", fail)
    results = recheck_report(_document(*t12_eps_report))
    assert all(r.status == CHECK_PASS for r in results)


def test_certificate_words_use_generator_indices(t12_eps_report):
    inp, report = t12_eps_report
    space = get_space(inp.ambient, 3)
    for cert in report.lower_certs:
        value = evaluate_word(cert.word, report.generators, space)
        assert np.array_equal(value, space.root_element(cert.root, cert.scalar))


@pytest.mark.slow
@pytest.mark.parametrize("name", ["F2eps", "F4"])
def test_fixed_points(catalog, name):
    results = classify_fixed_points(catalog.ring(name), 3)
    assert results
    assert all(r.status == CHECK_PASS for r in results), [r.detail for r in results]


@pytest.mark.slow
def test_random_trials(F2eps):
    result = classify_random_suite(F2eps, 3, trials=100, rng=np.random.default_rng(20240229))
    assert result.status == CHECK_PASS, result.detail
    assert result.data["proper"] > 0
