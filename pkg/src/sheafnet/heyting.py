"""Heyting algebra of the lower Alexandrov opens of a finite poset.

Meet and join are intersection and union.  The implication Q => T is the
largest open whose meet with Q lies below T; pointwise it is

    x in (Q => T)  iff  for all y <= x: y in Q implies y in T,

and `oracle_implies` recomputes it as the literal union of all qualifying
opens, which is the definition.  Negation is Q => bottom.  All operations
have bit-mask twins (suffix ``_mask``) used by the exhaustive harnesses.
"""

from .arch_site import is_open, open_masks
from .errors import PosetError


def _require_open(poset, subset, name):
    if not is_open(poset, subset):
        raise PosetError(f"{name} = {sorted(map(str, subset))} is not downward closed")
    return poset.mask_of(subset)


def top_mask(poset):
    return (1 << len(poset.elements)) - 1


def implies_mask(poset, q, t):
    out = 0
    for i in range(len(poset.elements)):
        if poset._down[i] & q & ~t == 0:
            out |= 1 << i
    return out


def neg_mask(poset, q):
    return implies_mask(poset, q, 0)


def oracle_implies_mask(poset, q, t, opens=None):
    if opens is None:
        opens = open_masks(poset)
    out = 0
    for v in opens:
        if v & q & ~t == 0:
            out |= v
    return out


def meet(poset, a, b):
    _require_open(poset, a, "a")
    _require_open(poset, b, "b")
    return frozenset(a & b)


def join(poset, a, b):
    _require_open(poset, a, "a")
    _require_open(poset, b, "b")
    return frozenset(a | b)


def leq(poset, a, b):
    return _require_open(poset, a, "a") & ~_require_open(poset, b, "b") == 0


def implies(poset, q, t):
    """Q => T on opens, by the pointwise formula."""
    qm = _require_open(poset, q, "q")
    tm = _require_open(poset, t, "t")
    return poset.set_of(implies_mask(poset, qm, tm))


def neg(poset, q):
    return implies(poset, q, frozenset())


def oracle_implies(poset, q, t, bound=None):
    """Q => T recomputed as the union of every open V with V /\\ Q <= T."""
    qm = _require_open(poset, q, "q")
    tm = _require_open(poset, t, "t")
    return poset.set_of(oracle_implies_mask(poset, qm, tm, open_masks(poset, bound)))


def implication_table(poset, bound=None):
    """The full opens x opens implication matrix, for reports."""
    opens = open_masks(poset, bound)
    label = lambda m: ",".join(sorted(str(e) for e in poset.set_of(m))) or "{}"
    return {
        label(q): {label(t): label(implies_mask(poset, q, t)) for t in opens}
        for q in opens
    }
