"""Intuitionistic logic on the open-set algebra.

The two-element chain already refuses excluded middle: the negation of the
bottom open {0} is empty, so its double negation is everything.
"""

from sheafnet import heyting as hey
from sheafnet.arch_site import FinitePoset, lower_open_sets

poset = FinitePoset.chain(1)
opens = lower_open_sets(poset)
print("opens of the 2-chain:", [sorted(o) for o in opens])

q = frozenset({0})
print("~{0}      =", sorted(hey.neg(poset, q)))
print("~~{0}     =", sorted(hey.neg(poset, hey.neg(poset, q))), " (not {0}: non-Boolean)")
print("T => {0}  =", sorted(hey.implies(poset, frozenset({0, 1}), q)))

print("\nimplication table (rows Q, columns T):")
table = hey.implication_table(poset)
for qk, row in table.items():
    print(f"  Q={qk:>4}: ", {tk: v for tk, v in row.items()})

print("\nthe pointwise formula agrees with the sup-oracle on every pair:")
ok = all(
    hey.implies(poset, a, b) == hey.oracle_implies(poset, a, b)
    for a in opens for b in opens)
print("  exact agreement:", ok)
