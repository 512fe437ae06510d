import math
import random

import pytest

from sheafnet.arch_site import FinitePoset
from sheafnet.chains import ChainObject, DeltaSequence, all_chain_subs
from sheafnet.errors import InfinityArithmetic, LanguageError
from sheafnet.seminfo import (
    BooleanAlgebra,
    BooleanLanguage,
    OpenSetAlgebra,
    ambiguity,
    cardinality_precision,
    cbh_precision,
    check_cocycle,
    check_concavity,
    check_increasing,
    check_independence,
    condition,
    conditioning_preserves_exclusion,
    content,
    degree_zero_invariance,
    delta_precision,
    kl_divergence,
    kl_symmetrized,
    localized_precision,
    mutual_information,
    psi_cbh,
    psi_localized,
)

LN = math.log


def lang_of(n):
    return BooleanLanguage([f"s{i}" for i in range(n)])


def subsets(lang):
    return list(BooleanAlgebra(lang).elements())


# -- conditioning -------------------------------------------------------------

def test_condition_boolean_example():
    lang = BooleanLanguage([1, 2, 3, 4])
    alg = BooleanAlgebra(lang)
    assert condition(alg, frozenset({1}), frozenset({1, 2})) == frozenset({1, 3, 4})


def test_condition_trivial_cases():
    lang = lang_of(3)
    alg = BooleanAlgebra(lang)
    t = frozenset({"s0"})
    assert condition(alg, t, alg.top) == t
    assert condition(alg, alg.top, frozenset({"s1"})) == alg.top


def test_condition_monoid_action_boolean_exhaustive():
    lang = lang_of(4)
    alg = BooleanAlgebra(lang)
    subs = subsets(lang)
    for t in subs:
        for q in subs:
            assert alg.leq(t, condition(alg, t, q))
            for r in subs:
                assert condition(alg, condition(alg, t, q), r) == \
                    condition(alg, t, alg.meet(q, r))


def test_condition_monoid_action_heyting_two_chain():
    alg = OpenSetAlgebra(FinitePoset.chain(1))
    opens = list(alg.elements())
    for t in opens:
        for q in opens:
            assert alg.leq(t, condition(alg, t, q))
            for r in opens:
                assert condition(alg, condition(alg, t, q), r) == \
                    condition(alg, t, alg.meet(q, r))


# -- content and psi ------------------------------------------------------------

def test_content_values_64_states():
    lang = lang_of(64)
    single = frozenset({"s0"})
    assert content(lang, single) == 63.0
    assert content(lang, frozenset(lang.states) - single) == 1.0
    assert content(lang, frozenset(lang.states)) == 0.0
    assert content(lang, frozenset()) == 64.0


def test_psi_cbh_values():
    lang = lang_of(64)
    assert psi_cbh(lang, frozenset(lang.states)) == 0.0
    assert psi_cbh(lang, frozenset({"s0"})) == pytest.approx(LN(1 / 64))
    lang4 = lang_of(4)
    assert psi_cbh(lang4, frozenset({"s0", "s1"})) == pytest.approx(LN(1 / 2))
    assert psi_cbh(lang4, frozenset()) == float("-inf")


def test_psi_cbh_strictly_increasing():
    lang = lang_of(5)
    for t in subsets(lang):
        for extra in set(lang.states) - t:
            assert psi_cbh(lang, t | {extra}) > psi_cbh(lang, t)


def test_psi_localized():
    lang = lang_of(4)
    p = frozenset({"s3"})
    notp = frozenset(lang.states) - p
    assert psi_localized(lang, p, notp) == 0.0
    assert psi_localized(lang, p, frozenset({"s0"})) == pytest.approx(LN(1 / 3))
    assert psi_localized(lang, frozenset(), frozenset({"s0"})) == \
        psi_cbh(lang, frozenset({"s0"}))
    with pytest.raises(LanguageError):
        psi_localized(lang, p, frozenset({"s3"}))


# -- ambiguity and cocycle -------------------------------------------------------

def test_ambiguity_example():
    lang = BooleanLanguage(["00", "01", "10", "11"])
    psi = cbh_precision(lang)
    s = frozenset({"00", "01"})
    q = frozenset({"01", "11"})
    assert ambiguity(psi, s, q) == pytest.approx(LN(3 / 2))
    assert ambiguity(psi, s, psi.algebra.top) == 0.0


def test_ambiguity_nonnegative_and_maximal_at_p():
    lang = lang_of(4)
    psi = cbh_precision(lang)
    alg = psi.algebra
    p = frozenset({"s0"})
    notp = alg.neg(p)
    theories = [t for t in subsets(lang) if t and t <= notp]
    # conditioning by Q = P sends every theory excluding P to not P
    for t in theories:
        assert condition(alg, t, p) == notp
        phi = ambiguity(psi, t, p)
        assert phi >= -1e-12
        assert phi == pytest.approx(psi(notp) - psi(t))


def test_ambiguity_infinity_guard():
    lang = lang_of(3)
    psi = cbh_precision(lang)
    with pytest.raises(InfinityArithmetic):
        ambiguity(psi, frozenset(), psi.algebra.top)


def test_cocycle_identity_random_triples():
    rng = random.Random(17)
    lang = lang_of(6)
    psi = cbh_precision(lang)
    subs = [s for s in subsets(lang) if s]
    triples = [(rng.choice(subs), rng.choice(subs), rng.choice(subs))
               for _ in range(500)]
    report = check_cocycle(psi, triples)
    assert report.passed(1e-12)


def test_cocycle_idempotent_substitution():
    lang = lang_of(4)
    psi = cbh_precision(lang)
    alg = psi.algebra
    q = frozenset({"s0", "s1"})
    for s in subsets(lang):
        if not s:
            continue
        lhs = ambiguity(psi, s, q)
        rhs = ambiguity(psi, s, q) + ambiguity(psi, condition(alg, s, q), q)
        assert lhs == pytest.approx(rhs)  # phi^{Q and Q} = phi^Q


# -- concavity --------------------------------------------------------------------

def full_domain(alg, p):
    notp = alg.neg(p)
    theories = [t for t in alg.elements() if alg.leq(t, notp)]
    props = [q for q in alg.elements() if alg.leq(p, q)]
    for q in props:
        for t in theories:
            for t2 in theories:
                if alg.leq(t, t2):
                    yield q, t, t2


def test_psi_cbh_concave_exhaustive():
    lang = lang_of(5)
    psi = cbh_precision(lang)
    report = check_concavity(psi, full_domain(psi.algebra, frozenset()))
    assert report.passed(0.0)  # exact nonnegativity


def test_psi_localized_concave_exhaustive():
    lang = lang_of(4)
    p = frozenset({"s3"})
    psi = localized_precision(lang, p)
    report = check_concavity(psi, full_domain(psi.algebra, p))
    assert report.passed(1e-12)


def test_cardinality_on_opens_is_not_concave():
    # the poset of the minimal counterexample: cardinality gains more on a
    # larger theory, so a negative double difference is found and reported
    poset = FinitePoset.chain(1)
    psi = cardinality_precision(poset)
    alg = psi.algebra
    report = check_concavity(psi, full_domain(alg, alg.bottom))
    assert report.samples > 0
    assert not report.passed(1e-12)
    assert report.witness is not None


def test_delta_precision_concavity_reported_negative():
    e = ChainObject.of({0, 1}, {0})
    psi = delta_precision(e, DeltaSequence.dyadic(1))
    alg = psi.algebra
    subs = all_chain_subs(e)
    domain = [(q, t, t2) for q in subs for t in subs for t2 in subs if alg.leq(t, t2)]
    report = check_concavity(psi, domain)
    assert report.minimum == -0.5  # the frozen counterexample


# -- mutual information and divergence ----------------------------------------------

def test_mutual_information_trivial_and_symmetry():
    lang = lang_of(4)
    psi = cbh_precision(lang)
    t = frozenset({"s0", "s1"})
    q = frozenset({"s1", "s2"})
    assert mutual_information(psi, t, q, psi.algebra.top) == pytest.approx(0.0)
    assert mutual_information(psi, t, q, q) == pytest.approx(ambiguity(psi, t, q))
    r = frozenset({"s0", "s2"})
    assert mutual_information(psi, t, q, r) == mutual_information(psi, t, r, q)


def test_mutual_information_nonnegative_product_language():
    lang = BooleanLanguage([(a, b) for a in "01" for b in "01"])
    psi = cbh_precision(lang)
    alg = psi.algebra
    q1 = frozenset(s for s in lang.states if s[0] == "0")   # first coordinate event
    q2 = frozenset(s for s in lang.states if s[1] == "1")   # second coordinate event
    for t in alg.elements():
        if not t:
            continue
        assert mutual_information(psi, t, q1, q2) >= -1e-12


def test_kl_divergence_properties():
    rng = random.Random(3)
    lang = lang_of(8)
    psi = cbh_precision(lang)
    alg = psi.algebra
    subs = [s for s in subsets(lang) if s]
    for _ in range(200):
        s0, s1, q = rng.choice(subs), rng.choice(subs), rng.choice(subs)
        assert kl_divergence(psi, q, s0, s0) == 0.0
        if s0 & s1:
            assert kl_divergence(psi, alg.top, s0, s1) == 0.0
            d = kl_divergence(psi, q, s0, s1)
            assert d >= -1e-12
            sym = kl_symmetrized(psi, q, s0, s1)
            assert sym == pytest.approx(kl_symmetrized(psi, q, s1, s0))


# -- independence -----------------------------------------------------------------

def test_independence_product_blocks():
    lang = BooleanLanguage([(a, b) for a in "01" for b in "ab"])
    q = frozenset(s for s in lang.states if s[0] == "0")
    r = frozenset(s for s in lang.states if s[1] == "a")
    independent, residual = check_independence(lang, q, r)
    assert independent and residual <= 1e-12


def test_independence_failures_and_overlap():
    lang = lang_of(4)
    q = frozenset({"s0", "s1"})
    independent, _ = check_independence(lang, q, q)
    assert not independent
    r = frozenset({"s1", "s2"})
    independent, residual = check_independence(lang, q, r)
    assert independent  # m=1/4 = 1/2 * 1/2: these do multiply
    assert residual <= 1e-12


# -- exclusion preservation ---------------------------------------------------------

def test_conditioning_preserves_exclusion_boolean_exhaustive():
    lang = lang_of(5)
    alg = BooleanAlgebra(lang)
    for p in subsets(lang):
        notp = alg.neg(p)
        qs = [q for q in subsets(lang) if alg.leq(p, q)]
        ts = [t for t in subsets(lang) if alg.leq(t, notp)]
        for q in qs:
            for t in ts:
                assert conditioning_preserves_exclusion(alg, t, p, q)


def test_conditioning_preserves_exclusion_heyting_two_chain():
    alg = OpenSetAlgebra(FinitePoset.chain(1))
    opens = list(alg.elements())
    for p in opens:
        notp = alg.neg(p)
        for q in opens:
            if not alg.leq(p, q):
                continue
            for t in opens:
                if alg.leq(t, notp):
                    assert conditioning_preserves_exclusion(alg, t, p, q)


def test_exclusion_precondition_reported():
    lang = lang_of(3)
    alg = BooleanAlgebra(lang)
    p = frozenset({"s0"})
    with pytest.raises(LanguageError):
        conditioning_preserves_exclusion(alg, frozenset({"s0"}), p, alg.top)


# -- degree zero ----------------------------------------------------------------------

def test_degree_zero_invariance_reported_empirically():
    lang = lang_of(3)
    psi_const = cbh_precision(lang)
    psi_const.fn = lambda t: 1.0
    invariant, constant = degree_zero_invariance(psi_const, frozenset({"s0"}))
    assert invariant and constant
    psi = cbh_precision(lang)
    invariant, constant = degree_zero_invariance(psi, frozenset({"s0"}))
    assert not invariant  # conditioning does move psi_cbh
    assert not constant


def test_check_increasing_helper():
    lang = lang_of(4)
    psi = cbh_precision(lang)
    pairs = [(a, b) for a in subsets(lang) if a for b in subsets(lang) if b]
    ok, witness = check_increasing(psi, pairs)
    assert ok and witness is None
    psi_bad = cbh_precision(lang)
    psi_bad.fn = lambda t: -len(t)
    ok, witness = check_increasing(psi_bad, pairs)
    assert not ok and witness is not None
