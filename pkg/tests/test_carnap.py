import math
import random

import pytest

from sheafnet.carnap import (
    build_language,
    build_symmetry_group,
    orbit_report,
    self_duality_holds,
    simple_content_report,
    simple_propositions,
    simples_form_single_orbit,
    state_type,
    symmetry_generators,
)
from sheafnet.errors import BoundExceeded
from sheafnet.seminfo import cbh_precision, content


def l23():
    return build_language(3, [2, 2])


def test_state_counts():
    assert len(build_language(1, [2]).states) == 2
    assert len(l23().states) == 64
    assert len(build_language(2, [3, 2]).states) == 36


def test_proposition_count_symbolic():
    assert l23().proposition_count == 2 ** 64


def test_state_bound():
    with pytest.raises(BoundExceeded):
        build_language(10, [4, 4], bound=10**5)


def test_labels_deterministic():
    lang = build_language(2, [2])
    assert lang.labels()[:2] == ("A1|A1", "A1|A2")


# -- symmetry group -----------------------------------------------------------

def test_group_order_one_binary_attribute():
    lang = build_language(1, [2])
    group = build_symmetry_group(lang)
    assert group.order == 2


def test_group_order_l23_is_48():
    group = build_symmetry_group(l23())
    assert group.order == 48


def test_attribute_exchange_only_for_equal_arity():
    lang = build_language(1, [2, 3])
    gens = symmetry_generators(lang)
    assert not any(name.startswith("exch") for name in gens)
    lang2 = build_language(1, [2, 2])
    gens2 = symmetry_generators(lang2)
    assert any(name.startswith("exch") for name in gens2)


def test_kappa_has_order_four():
    """Value flip composed with attribute exchange is a 4-cycle on the value
    square (A1G1 -> G1A2 -> ... pattern)."""
    lang = build_language(1, [2, 2])
    gens = symmetry_generators(lang)
    flip_a = gens["flip_A12"]
    exch = gens["exch_AB"]
    kappa = {s: exch[flip_a[s]] for s in lang.states}
    power = dict(kappa)
    order = 1
    while any(power[s] != s for s in lang.states):
        power = {s: kappa[power[s]] for s in lang.states}
        order += 1
    assert order == 4


# -- orbits -------------------------------------------------------------------

def test_l23_orbit_structure():
    report = orbit_report(l23())
    assert report.group_order == 48
    assert report.sizes() == (4, 12, 24, 24)
    by_type = {label: (size, stab) for size, stab, label, _ in report.orbits}
    assert by_type["I"] == (4, 12)
    assert by_type["II"] == (24, 2)
    assert by_type["III"] == (12, 4)
    assert by_type["IV"] == (24, 2)
    assert sum(report.sizes()) == 64


def test_single_binary_attribute_single_orbit():
    report = orbit_report(build_language(1, [2]))
    assert report.sizes() == (2,)


def test_state_type_predicates():
    lang = l23()
    same = ((0, 0), (0, 0), (0, 0))
    assert state_type(lang, same) == "I"
    one_aspect = ((0, 0), (0, 0), (1, 0))
    assert state_type(lang, one_aspect) == "II"
    two_aspects = ((0, 0), (0, 0), (1, 1))
    assert state_type(lang, two_aspects) == "III"
    distinct = ((0, 0), (0, 1), (1, 0))
    assert state_type(lang, distinct) == "IV"


# -- simples -----------------------------------------------------------------

def test_twelve_simples_self_dual_single_orbit():
    lang = l23()
    simples = simple_propositions(lang)
    assert len(simples) == 12
    assert all(len(s.truth_set) == 32 for s in simples)
    assert self_duality_holds(lang, simples) is True
    assert simples_form_single_orbit(lang, simples=simples)


def test_self_duality_skipped_for_non_binary():
    lang = build_language(1, [3])
    assert self_duality_holds(lang) is None


def test_simple_content_report_documents_discrepancy():
    report = simple_content_report(l23())
    assert report["computed_contents"] == [32.0]
    assert report["literature_value"] == 58
    assert report["agrees_with_literature"] is False


# -- invariance ---------------------------------------------------------------

def test_uniform_measure_invariant_under_group():
    lang = l23()
    group = build_symmetry_group(lang)
    blang = lang.to_boolean_language()
    rng = random.Random(29)
    states = list(lang.states)
    for _ in range(20):
        t = frozenset(rng.sample(states, rng.randint(1, 20)))
        c = content(blang, t)
        for perm in group.generators.values():
            assert content(blang, frozenset(perm[x] for x in t)) == c


def test_psi_cbh_constant_on_orbits_of_theories():
    lang = l23()
    group = build_symmetry_group(lang)
    blang = lang.to_boolean_language()
    psi = cbh_precision(blang)
    rng = random.Random(31)
    states = list(lang.states)
    for _ in range(10):
        t = frozenset(rng.sample(states, rng.randint(1, 30)))
        base = psi(t)
        for perm in group.generators.values():
            assert math.isclose(psi(frozenset(perm[x] for x in t)), base,
                                rel_tol=0, abs_tol=1e-12)
