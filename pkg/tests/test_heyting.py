import random

import pytest

from sheafnet import heyting as hey
from sheafnet.arch_site import FinitePoset, open_masks
from sheafnet.errors import PosetError


def random_poset(rng, n):
    rel = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.4:
                rel.append((i, j))
    return FinitePoset(range(n), rel)


def test_two_chain_identity_case():
    p = FinitePoset.chain(1)
    q = frozenset({0})
    assert hey.implies(p, q, q) == frozenset({0, 1})


def test_two_chain_double_negation_not_boolean():
    p = FinitePoset.chain(1)
    q = frozenset({0})
    assert hey.neg(p, q) == frozenset()
    assert hey.neg(p, frozenset()) == frozenset({0, 1})
    assert hey.implies(p, hey.neg(p, q), frozenset()) == frozenset({0, 1})  # ~~{0} = T


def test_two_chain_top_implies():
    p = FinitePoset.chain(1)
    assert hey.implies(p, frozenset({0, 1}), frozenset({0})) == frozenset({0})


def test_rejects_non_open_argument():
    p = FinitePoset.chain(1)
    with pytest.raises(PosetError):
        hey.implies(p, frozenset({1}), frozenset())


def test_vacuous_and_equal_cases():
    p = FinitePoset.chain(2)
    top = frozenset(p.elements)
    for t in ({0}, {0, 1}, set()):
        assert hey.oracle_implies(p, frozenset(), frozenset(t)) == top
        assert hey.oracle_implies(p, frozenset(t), frozenset(t)) == top


def test_pointwise_equals_oracle_exhaustive_small():
    rng = random.Random(11)
    for _ in range(12):
        p = random_poset(rng, rng.randint(2, 6))
        opens = open_masks(p)
        for q in opens:
            for t in opens:
                assert hey.implies_mask(p, q, t) == hey.oracle_implies_mask(p, q, t, opens)


def test_heyting_adjunction_and_lattice_laws():
    rng = random.Random(5)
    for _ in range(8):
        p = random_poset(rng, rng.randint(2, 6))
        opens = open_masks(p)
        top = hey.top_mask(p)
        for q in opens:
            nq = hey.neg_mask(p, q)
            nnnq = hey.neg_mask(p, hey.neg_mask(p, nq))
            assert nnnq == nq  # ~~~Q = ~Q
            assert hey.implies_mask(p, 0, q) == top
            assert hey.implies_mask(p, q, top) == top
            for t in opens:
                im = hey.implies_mask(p, q, t)
                for v in opens:
                    assert (v & ~im == 0) == (v & q & ~t == 0)  # V <= (Q=>T) iff V/\Q <= T
                for r in opens:
                    assert q & (t | r) == (q & t) | (q & r)  # distributivity


def test_implication_table_two_chain():
    p = FinitePoset.chain(1)
    table = hey.implication_table(p)
    assert set(table) == {"{}", "0", "0,1"}
    assert table["0,1"]["0"] == "0"
    assert table["0"]["{}"] == "{}"
    assert table["{}"]["{}"] == "0,1"
