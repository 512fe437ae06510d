import random

import pytest

from sheafnet.chains import (
    ChainObject,
    ChainSub,
    DeltaSequence,
    all_chain_subs,
    chain_bottom,
    chain_implication,
    chain_negation,
    chain_oracle_implies,
    chain_top,
    psi_delta,
)
from sheafnet.errors import LanguageError, PresheafError
from sheafnet.presheaf import subobject_implies


def test_chain_object_validation():
    with pytest.raises(PresheafError):
        ChainObject.of({"x"}, {"x", "y"})
    c = ChainObject.of({"x", "y"}, {"x"})
    assert c.n == 1 and c.depth("x") == 1 and c.depth("y") == 0


def test_boolean_case_is_classical_formula():
    e = ChainObject.of({1, 2, 3, 4})
    t = ChainSub.of(e, {1})
    q = ChainSub.of(e, {1, 2})
    u = chain_implication(e, t, q)
    assert u.levels == (frozenset({1, 3, 4}),)  # T or not Q


def test_implication_trivial_cases():
    e = ChainObject.of({"x", "y"}, {"x"})
    bot, top = chain_bottom(e), chain_top(e)
    assert chain_implication(e, top, bot).levels == top.levels  # Q = bot -> top
    for t in all_chain_subs(e):
        assert chain_implication(e, t, bot).levels == top.levels
        assert chain_implication(e, t, t).levels == top.levels


def test_singleton_example_matches_oracle():
    e = ChainObject.of({"x", "y"}, {"x"})
    t = ChainSub.of(e, {"x"}, set())
    q = ChainSub.of(e, {"x"}, {"x"})
    u = chain_implication(e, t, q)
    assert u.levels == chain_oracle_implies(e, t, q).levels
    assert u.levels == (frozenset({"x", "y"}), frozenset())


def test_negation_formula_and_equivalences():
    rng = random.Random(4)
    e = ChainObject.of({0, 1, 2}, {0, 1}, {0})
    subs = all_chain_subs(e)
    bot = chain_bottom(e)
    for q in subs:
        neg = chain_negation(e, q)
        # displayed formula: level k is the intersection of the complements
        expect = []
        acc = None
        for k in range(e.n + 1):
            comp = e.levels[k] - q.levels[k]
            acc = comp if acc is None else acc & comp
            expect.append(comp)
        running = []
        inter = None
        for comp in expect:
            inter = comp if inter is None else inter & comp
            running.append(inter)
        assert neg.levels == tuple(running)
        assert neg.levels == chain_implication(e, bot, q).levels
    assert chain_negation(e, chain_top(e)).levels == bot.levels
    assert chain_negation(e, bot).levels == chain_top(e).levels


def test_implication_equals_oracle_exhaustive_small_chains():
    shapes = [(2,), (2, 1), (2, 2), (3, 1), (2, 1, 1), (2, 2, 1), (1, 1, 1, 1)]
    for shape in shapes:
        points = [f"p{i}" for i in range(shape[0])]
        levels = [set(points[: s]) for s in shape]
        e = ChainObject.of(*levels)
        subs = all_chain_subs(e)
        for t in subs:
            for q in subs:
                assert chain_implication(e, t, q).levels == \
                    chain_oracle_implies(e, t, q).levels


def test_implication_agrees_with_generic_presheaf_calculus():
    e = ChainObject.of({0, 1, 2}, {0, 1}, {0})
    p = e.as_presheaf()
    for t in all_chain_subs(e):
        for q in all_chain_subs(e):
            u = chain_implication(e, t, q)
            generic = subobject_implies(p, q.as_subobject(p), t.as_subobject(p))
            assert u.as_subobject(p).parts == generic.parts


# -- delta sequences and psi ----------------------------------------------------

def test_delta_validation():
    with pytest.raises(LanguageError):
        DeltaSequence.of([1.0, 0.6, 0.5])  # 1.0 <= 0.6 + 0.5
    with pytest.raises(LanguageError):
        DeltaSequence.of([1.0, -0.5])
    d = DeltaSequence.dyadic(3)
    assert d.values == (1.0, 0.5, 0.25, 0.125)


def test_psi_delta_examples():
    e = ChainObject.of({"x", "y"}, {"x"})
    d = DeltaSequence.of([1.0, 0.5])
    assert psi_delta(chain_bottom(e), d) == 0.0
    assert psi_delta(chain_top(e), d) == 2.5
    mu = {"x": 2.0, "y": 1.0}
    assert psi_delta(chain_top(e), d, mu) == 3.0 + 1.0


def test_psi_delta_strictly_increasing():
    e = ChainObject.of({0, 1}, {0})
    d = DeltaSequence.dyadic(e.n)
    subs = all_chain_subs(e)
    for t in subs:
        for t2 in subs:
            if t.leq(t2) and t.levels != t2.levels:
                assert psi_delta(t, d) < psi_delta(t2, d)


def test_psi_delta_concavity_fails_in_general():
    """Minimal counterexample to blanket concavity of psi_delta: the double
    difference goes negative when the conditioning proposition loses depth
    down the chain.  Verified against the literal sup-oracle too."""
    e = ChainObject.of({0, 1}, {0})
    d = DeltaSequence.dyadic(1)
    q = ChainSub.of(e, {0}, set())        # asserted at level 0 only
    t = chain_bottom(e)
    t2 = ChainSub.of(e, {0}, set())
    for impl in (chain_implication, chain_oracle_implies):
        dd = (psi_delta(impl(e, t, q), d) - psi_delta(t, d)
              - psi_delta(impl(e, t2, q), d) + psi_delta(t2, d))
        assert dd == -0.5


def test_psi_delta_concave_for_full_depth_propositions():
    """Concavity does hold (exhaustively, small chains) when Q is asserted at
    full depth: Q_k = Q_0 /\\ E_k at every level."""
    shapes = [(2, 1), (2, 2), (3, 1), (2, 1, 1), (3, 2, 1), (2, 2, 1, 1)]
    for shape in shapes:
        pts = [f"p{i}" for i in range(shape[0])]
        e = ChainObject.of(*[set(pts[:s]) for s in shape])
        d = DeltaSequence.dyadic(e.n)
        subs = all_chain_subs(e)
        cyl = [q for q in subs
               if all(q.levels[k] == q.levels[0] & e.levels[k] for k in range(e.n + 1))]
        for q in cyl:
            for t in subs:
                for t2 in subs:
                    if t.leq(t2):
                        dd = (psi_delta(chain_implication(e, t, q), d) - psi_delta(t, d)
                              - psi_delta(chain_implication(e, t2, q), d) + psi_delta(t2, d))
                        assert dd >= 0.0
