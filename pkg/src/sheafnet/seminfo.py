"""Semantic information measures over Boolean and Heyting languages.

A theory is represented by the conjunction of its axioms: a truth set in
the Boolean case, an open or a chain subobject in the Heyting cases.
Conditioning is the implication T|Q = (Q => T); it is a monoid action,
(T|Q)|R = T|(Q and R), and always weakens: T <= T|Q.

Precision functions psi grade theories (increasing, ideally concave);
the ambiguity of S against a counterexample Q is phi^Q(S) = psi(S|Q) -
psi(S), a cocycle: phi^{Q and R}(S) = phi^Q(S) + phi^R(S|Q).  Mutual
information, the divergence analog and the independence/additivity checks
are algebraic combinations of the same four-point evaluations.

psi(bottom) = -inf is a legal value; any expression that would subtract
two infinities raises InfinityArithmetic instead of returning NaN.
"""

import math
from dataclasses import dataclass

from . import heyting as hey
from .chains import chain_bottom, chain_implication, chain_top, psi_delta
from .errors import InfinityArithmetic, LanguageError

NEG_INF = float("-inf")


# ---------------------------------------------------------------------------
# Languages and algebras
# ---------------------------------------------------------------------------

class BooleanLanguage:
    """A finite set of elementary states with a strictly positive measure."""

    def __init__(self, states, measure=None):
        self.states = tuple(states)
        if len(set(self.states)) != len(self.states):
            raise LanguageError("repeated elementary states")
        if not self.states:
            raise LanguageError("a language needs at least one state")
        measure = dict(measure) if measure else {s: 1.0 for s in self.states}
        missing = set(self.states) - set(measure)
        if missing:
            raise LanguageError(f"measure missing on {sorted(map(str, missing))}")
        if any(measure[s] <= 0 for s in self.states):
            raise LanguageError("measure must be strictly positive")
        self.measure = {s: float(measure[s]) for s in self.states}
        self.total = sum(self.measure.values())

    def m(self, subset):
        return sum(self.measure[s] for s in subset)


class BooleanAlgebra:
    """Propositions and theories as frozen truth sets of a language."""

    def __init__(self, lang):
        self.lang = lang
        self.top = frozenset(lang.states)
        self.bottom = frozenset()

    def check(self, t):
        t = frozenset(t)
        if not t <= self.top:
            raise LanguageError("foreign states in proposition")
        return t

    def meet(self, a, b):
        return self.check(a) & self.check(b)

    def join(self, a, b):
        return self.check(a) | self.check(b)

    def leq(self, a, b):
        return self.check(a) <= self.check(b)

    def implies(self, q, t):
        return self.check(t) | (self.top - self.check(q))

    def neg(self, q):
        return self.top - self.check(q)

    def elements(self):
        states = list(self.lang.states)
        for mask in range(2 ** len(states)):
            yield frozenset(s for i, s in enumerate(states) if (mask >> i) & 1)


class OpenSetAlgebra:
    """The Heyting algebra of lower opens of a finite poset."""

    def __init__(self, poset):
        self.poset = poset
        self.top = frozenset(poset.elements)
        self.bottom = frozenset()

    def check(self, t):
        t = frozenset(t)
        hey._require_open(self.poset, t, "argument")
        return t

    def meet(self, a, b):
        return hey.meet(self.poset, a, b)

    def join(self, a, b):
        return hey.join(self.poset, a, b)

    def leq(self, a, b):
        return hey.leq(self.poset, a, b)

    def implies(self, q, t):
        return hey.implies(self.poset, q, t)

    def neg(self, q):
        return hey.neg(self.poset, q)

    def elements(self):
        from .arch_site import lower_open_sets

        return iter(lower_open_sets(self.poset))


class ChainAlgebra:
    """Subobjects of an injective chain object."""

    def __init__(self, chain):
        self.chain = chain
        self.top = chain_top(chain)
        self.bottom = chain_bottom(chain)

    def check(self, t):
        return t

    def meet(self, a, b):
        return a.meet(b)

    def join(self, a, b):
        return a.join(b)

    def leq(self, a, b):
        return a.leq(b)

    def implies(self, q, t):
        return chain_implication(self.chain, t, q)

    def neg(self, q):
        return chain_implication(self.chain, self.bottom, q)

    def elements(self):
        from .chains import all_chain_subs

        return iter(all_chain_subs(self.chain))


def condition(algebra, t, q):
    """T|Q = (Q => T), the largest theory whose meet with Q implies T."""
    return algebra.implies(q, t)


# ---------------------------------------------------------------------------
# Content and precision
# ---------------------------------------------------------------------------

def content(lang, t):
    """c(T): total measure of the elementary states excluded by T."""
    t = frozenset(t)
    return lang.m(set(lang.states) - t)


def psi_cbh(lang, t):
    """psi_bottom(T) = ln((c(bottom) - c(T)) / c(bottom)) = ln(m(T)/m(E))."""
    mt = lang.m(frozenset(t))
    return NEG_INF if mt == 0 else math.log(mt / lang.total)


def psi_localized(lang, p, t):
    """psi_P(T) = ln(m(T) / m(not P)); defined for theories excluding P."""
    p = frozenset(p)
    t = frozenset(t)
    if not p:
        return psi_cbh(lang, t)
    if t & p:
        raise LanguageError("theory does not exclude the localizing proposition")
    denom = lang.m(set(lang.states) - p)
    if denom == 0:
        raise LanguageError("not P has measure zero; localization undefined")
    mt = lang.m(t)
    return NEG_INF if mt == 0 else math.log(mt / denom)


@dataclass
class PrecisionFunction:
    """An evaluation contract psi: theory -> extended real."""

    fn: object
    algebra: object
    name: str = "psi"
    increasing: bool = True
    concave: bool = True

    def __call__(self, t):
        return self.fn(t)


def cbh_precision(lang):
    alg = BooleanAlgebra(lang)
    return PrecisionFunction(lambda t: psi_cbh(lang, t), alg, "psi_cbh")


def localized_precision(lang, p):
    alg = BooleanAlgebra(lang)
    return PrecisionFunction(lambda t: psi_localized(lang, p, t), alg, f"psi_{p!r}")


def delta_precision(chain, delta, mu=None):
    """psi_delta on chain subobjects: increasing; concave only against
    full-depth propositions (a counterexample lives in the test suite)."""
    alg = ChainAlgebra(chain)
    return PrecisionFunction(lambda t: psi_delta(t, delta, mu), alg,
                             "psi_delta", increasing=True, concave=False)


def cardinality_precision(poset):
    """Raw open-set cardinality: increasing but in general not concave."""
    alg = OpenSetAlgebra(poset)
    return PrecisionFunction(lambda t: float(len(t)), alg, "cardinality",
                             increasing=True, concave=False)


# ---------------------------------------------------------------------------
# Derived quantities
# ---------------------------------------------------------------------------

def _diff(a, b):
    """a - b on extended reals, refusing inf - inf."""
    if math.isinf(a) and math.isinf(b):
        raise InfinityArithmetic("difference of two infinite precisions")
    return a - b


def ambiguity(psi, s, q):
    """phi^Q(S) = psi(S|Q) - psi(S); nonnegative for increasing psi."""
    alg = psi.algebra
    return _diff(psi(condition(alg, s, q)), psi(s))


def mutual_information(psi, t, q1, q2):
    """I(Q1;Q2)(T) = psi(T|Q1) + psi(T|Q2) - psi(T|Q1 and Q2) - psi(T)."""
    alg = psi.algebra
    a = psi(condition(alg, t, q1))
    b = psi(condition(alg, t, q2))
    c = psi(condition(alg, t, alg.meet(q1, q2)))
    d = psi(t)
    pos = a + b
    neg = c + d
    if math.isinf(pos) and math.isinf(neg):
        raise InfinityArithmetic("mutual information mixes infinities")
    return pos - neg


def kl_divergence(psi, q, s0, s1):
    """D^Q(S0;S1) = psi(S0 and S1|Q) - psi(S0 and S1) - psi(S0|Q) + psi(S0)."""
    alg = psi.algebra
    meet = alg.meet(s0, s1)
    a = psi(condition(alg, meet, q))
    b = psi(meet)
    c = psi(condition(alg, s0, q))
    d = psi(s0)
    pos = a + d
    neg = b + c
    if math.isinf(pos) and math.isinf(neg):
        raise InfinityArithmetic("divergence mixes infinities")
    return pos - neg


def kl_symmetrized(psi, q, s0, s1):
    return kl_divergence(psi, q, s0, s1) + kl_divergence(psi, q, s1, s0)


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CocycleReport:
    samples: int
    max_residual: float
    coboundary_ok: bool

    def passed(self, tol=1e-12):
        return self.samples > 0 and self.max_residual <= tol and self.coboundary_ok


def check_cocycle(psi, triples):
    """Residuals of phi^{Q and R}(S) = phi^Q(S) + phi^R(S|Q) over the given
    (S, Q, R) triples, plus the coboundary identity that defines phi."""
    alg = psi.algebra
    worst = 0.0
    n = 0
    coboundary_ok = True
    for s, q, r in triples:
        try:
            lhs = ambiguity(psi, s, alg.meet(q, r))
            rhs = ambiguity(psi, s, q) + ambiguity(psi, condition(alg, s, q), r)
        except InfinityArithmetic:
            continue
        n += 1
        worst = max(worst, abs(lhs - rhs))
        phi = ambiguity(psi, s, q)
        direct = _diff(psi(condition(alg, s, q)), psi(s))
        if phi != direct:
            coboundary_ok = False
    return CocycleReport(n, worst, coboundary_ok)


@dataclass(frozen=True)
class ConcavityReport:
    samples: int
    minimum: float
    witness: tuple = None

    def passed(self, tol=1e-12):
        return self.samples > 0 and self.minimum >= -tol


def concavity_defect(psi, q, t, t_weaker):
    """I_P(Q; T, T') = psi(T|Q) - psi(T) - psi(T'|Q) + psi(T'); nonnegative
    for a concave psi when T <= T'."""
    alg = psi.algebra
    pos = psi(condition(alg, t, q)) + psi(t_weaker)
    neg = psi(t) + psi(condition(alg, t_weaker, q))
    if math.isinf(pos) and math.isinf(neg):
        raise InfinityArithmetic("concavity defect mixes infinities")
    return pos - neg


def check_concavity(psi, domain):
    """Minimum of the double difference over (Q, T, T') samples with
    T <= T'; the sampler supplies the admissible triples."""
    minimum = math.inf
    witness = None
    n = 0
    for q, t, t2 in domain:
        if not psi.algebra.leq(t, t2):
            continue
        try:
            value = concavity_defect(psi, q, t, t2)
        except InfinityArithmetic:
            continue
        n += 1
        if value < minimum:
            minimum, witness = value, (q, t, t2)
    return ConcavityReport(n, minimum if n else math.inf, witness)


def check_increasing(psi, pairs):
    """True when psi(T) <= psi(T') for every supplied pair with T <= T'."""
    alg = psi.algebra
    for t, t2 in pairs:
        if alg.leq(t, t2) and psi(t) > psi(t2):
            return False, (t, t2)
    return True, None


def check_independence(lang, q, r, tol=1e-12):
    """Inductive independence m(Q and R) = m(Q) m(R) / m(E), with the
    additivity residual of inf = -ln(m(.)/m(E)) when it holds."""
    q, r = frozenset(q), frozenset(r)
    mq, mr, mqr = lang.m(q), lang.m(r), lang.m(q & r)
    independent = abs(mqr - mq * mr / lang.total) <= tol * max(1.0, lang.total)
    residual = None
    if independent and mq > 0 and mr > 0:
        inf_q = -math.log(mq / lang.total)
        inf_r = -math.log(mr / lang.total)
        inf_qr = -math.log(mqr / lang.total)
        residual = abs(inf_qr - inf_q - inf_r)
    return independent, residual


def conditioning_preserves_exclusion(algebra, t, p, q):
    """With T <= not P and Q >= P, is (T|Q) still below not P?  (It must be.)"""
    notp = algebra.neg(p)
    if not algebra.leq(t, notp):
        raise LanguageError("precondition violated: T does not exclude P")
    if not algebra.leq(p, q):
        raise LanguageError("precondition violated: Q is not implied by P")
    return algebra.leq(condition(algebra, t, q), notp)


def degree_zero_invariance(psi, p, theories=None, propositions=None):
    """Is psi invariant under all admissible conditionings (a degree-zero
    cocycle), and if so is it constant on the theories excluding P?
    Both facts are reported; neither is assumed."""
    alg = psi.algebra
    notp = alg.neg(p)
    if theories is None:
        theories = [t for t in alg.elements() if alg.leq(t, notp)]
    if propositions is None:
        propositions = [q for q in alg.elements() if alg.leq(p, q)]
    invariant = all(
        psi(condition(alg, s, q)) == psi(s) for s in theories for q in propositions)
    values = {psi(s) for s in theories}
    return invariant, len(values) <= 1
