"""Injective chain objects and their intuitionistic calculus.

A chain object is a nested family E_n <= ... <= E_1 <= E_0 of finite sets,
i.e. a presheaf on the total order 0 -> 1 -> ... -> n whose restriction
maps are inclusions.  Its subobjects are the nested families T with
T_k <= E_k, ordered levelwise.  The implication U = (Q => T) satisfies the
inductive formulas

    U_0 = T_0 or (E_0 - Q_0),      U_k = U_{k-1} and (T_k or (E_k - Q_k)),

the negation is the running intersection of the level complements, and the
precision of a subobject against a dominated weight sequence delta is

    psi_delta(T) = sum_k delta_k * mu(T_k),

which is strictly increasing and concave for the conditioning T -> (Q => T).
"""

from dataclasses import dataclass
from itertools import product as iproduct

from .arch_site import FinitePoset
from .errors import BoundExceeded, LanguageError, PresheafError
from .presheaf import Presheaf, Subobject


@dataclass(frozen=True)
class ChainObject:
    """Levels E_0 >= E_1 >= ... >= E_n as a tuple of frozensets."""

    levels: tuple

    @staticmethod
    def of(*levels):
        levels = tuple(frozenset(l) for l in levels)
        if not levels:
            raise PresheafError("a chain object needs at least one level")
        for k in range(1, len(levels)):
            if not levels[k] <= levels[k - 1]:
                raise PresheafError(f"level {k} is not included in level {k - 1}")
        return ChainObject(levels)

    @property
    def n(self):
        return len(self.levels) - 1

    def depth(self, x):
        """Largest k with x in E_k."""
        d = -1
        for k, level in enumerate(self.levels):
            if x in level:
                d = k
        return d

    def as_presheaf(self):
        poset = FinitePoset.chain(self.n)
        carriers = {k: tuple(sorted(self.levels[k], key=str)) for k in range(self.n + 1)}
        maps = {(k, k + 1): {s: s for s in carriers[k + 1]} for k in range(self.n)}
        return Presheaf(poset, carriers, maps)


@dataclass(frozen=True)
class ChainSub:
    """A subobject T_0 >= ... >= T_n of a chain object."""

    levels: tuple

    @staticmethod
    def of(chain, *levels):
        levels = tuple(frozenset(l) for l in levels)
        if len(levels) != chain.n + 1:
            raise PresheafError(f"expected {chain.n + 1} levels, got {len(levels)}")
        for k, (t, e) in enumerate(zip(levels, chain.levels)):
            if not t <= e:
                raise PresheafError(f"T_{k} is not a subset of E_{k}")
            if k and not levels[k] <= levels[k - 1]:
                raise PresheafError(f"T_{k} is not included in T_{k - 1}")
        return ChainSub(levels)

    def leq(self, other):
        return all(a <= b for a, b in zip(self.levels, other.levels))

    def meet(self, other):
        return ChainSub(tuple(a & b for a, b in zip(self.levels, other.levels)))

    def join(self, other):
        return ChainSub(tuple(a | b for a, b in zip(self.levels, other.levels)))

    def as_subobject(self, presheaf):
        return Subobject.of(presheaf, {k: self.levels[k] for k in range(len(self.levels))})


def chain_top(chain):
    return ChainSub(chain.levels)


def chain_bottom(chain):
    return ChainSub(tuple(frozenset() for _ in chain.levels))


def chain_implication(chain, t, q):
    """U = (Q => T) by the inductive level formulas."""
    _check_member(chain, t, "t")
    _check_member(chain, q, "q")
    levels = []
    acc = None
    for k in range(chain.n + 1):
        layer = t.levels[k] | (chain.levels[k] - q.levels[k])
        acc = layer if acc is None else (acc & layer)
        levels.append(acc)
    return ChainSub(tuple(levels))


def chain_negation(chain, q):
    """The running intersection of the level complements."""
    _check_member(chain, q, "q")
    levels = []
    acc = None
    for k in range(chain.n + 1):
        comp = chain.levels[k] - q.levels[k]
        acc = comp if acc is None else (acc & comp)
        levels.append(acc)
    return ChainSub(tuple(levels))


def _check_member(chain, sub, name):
    if len(sub.levels) != chain.n + 1:
        raise PresheafError(f"{name} has {len(sub.levels)} levels, chain has {chain.n + 1}")
    for k, (s, e) in enumerate(zip(sub.levels, chain.levels)):
        if not s <= e:
            raise PresheafError(f"{name} is not a subobject of the chain at level {k}")


def all_chain_subs(chain, bound=200_000):
    """Every subobject; each point contributes an independent level choice."""
    points = sorted(chain.levels[0], key=str)
    choices = [chain.depth(x) + 2 for x in points]
    total = 1
    for c in choices:
        total *= c
    if total > bound:
        raise BoundExceeded(f"{total} subobjects exceeds bound {bound}")
    out = []
    for combo in iproduct(*(range(c) for c in choices)):
        levels = []
        for k in range(chain.n + 1):
            levels.append(frozenset(
                x for x, lev in zip(points, combo) if lev - 1 >= k))
        out.append(ChainSub(tuple(levels)))
    return out


def chain_oracle_implies(chain, t, q, bound=200_000):
    """Literal supremum: the join of every V with V /\\ Q <= T."""
    acc = chain_bottom(chain)
    for v in all_chain_subs(chain, bound):
        if v.meet(q).leq(t):
            acc = acc.join(v)
    return acc


# ---------------------------------------------------------------------------
# Precision
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DeltaSequence:
    """Strictly decreasing positive weights with the dominance property
    delta_k > delta_{k+1} + ... + delta_n."""

    values: tuple

    @staticmethod
    def of(values):
        values = tuple(float(v) for v in values)
        if not values or any(v <= 0 for v in values):
            raise LanguageError("delta values must be strictly positive")
        for k in range(len(values)):
            tail = sum(values[k + 1:])
            if values[k] <= tail:
                raise LanguageError(
                    f"dominance fails at index {k}: {values[k]} <= {tail}")
        return DeltaSequence(values)

    @staticmethod
    def dyadic(n):
        """delta_k = 2**-k for k = 0..n; always dominated."""
        return DeltaSequence(tuple(2.0 ** -k for k in range(n + 1)))


def psi_delta(t, delta, mu=None):
    """sum_k delta_k * mu(T_k); mu defaults to the counting measure."""
    if len(delta.values) != len(t.levels):
        raise LanguageError("delta length does not match the chain height")
    total = 0.0
    for d, level in zip(delta.values, t.levels):
        total += d * (len(level) if mu is None else sum(mu[x] for x in level))
    return total
