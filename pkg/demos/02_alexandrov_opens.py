"""The lower Alexandrov topology of a small site.

Every downward-closed subset is an open; the family is closed under union
and intersection, and the basic opens U_x satisfy the intersection
identity U_x /\ U_y = union of U_z over common lower bounds z.
"""

from sheafnet.arch_site import basis, build_poset, fork_surgery, lower_open_sets
from sheafnet.data import fixture_graph

poset = build_poset(fork_surgery(fixture_graph("diamond")))
opens = lower_open_sets(poset)
print(f"diamond poset on {len(poset.elements)} elements has {len(opens)} opens:")
for o in sorted(opens, key=lambda s: (len(s), sorted(s))):
    print("  ", "{" + ",".join(sorted(o)) + "}")

x, y = "b", "a1"
ux, uy = basis(poset, x), basis(poset, y)
meet = ux & uy
glue = frozenset().union(*(basis(poset, z) for z in meet)) if meet else frozenset()
print(f"U_{x} = {sorted(ux)}")
print(f"U_{y} = {sorted(uy)}")
print(f"U_{x} /\\ U_{y} = {sorted(meet)} = union of basics below: {sorted(glue)}")
