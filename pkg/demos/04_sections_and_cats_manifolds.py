"""Global sections of a functioning network and the cat's manifold.

A standard feed-forward sheaf has exactly one section per input state; the
cat's manifold keeps the sections whose output satisfies a predicate (here
the XOR example: which input pairs switch the lamp on?).
"""

from itertools import product

from sheafnet.arch_site import SiteGraph, fork_surgery
from sheafnet.presheaf import cats_manifold, sections, standard_feedforward_presheaf

g = SiteGraph.build(["u", "v", "w"], [("u", "w"), ("v", "w")])
fg = fork_surgery(g)
tang = fg.tangs()[0]
carriers = {"u": (0, 1), "v": (0, 1), "w": (0, 1)}
handle = {tang: {t: t[0] ^ t[1] for t in product((0, 1), repeat=2)}}
p = standard_feedforward_presheaf(fg, carriers, {}, handle)

all_sections = sections(p)
print(f"sections = {len(all_sections)} (one per input pair)")
for s in all_sections:
    print("  ", {k: s[k] for k in ("u", "v", "w")})

lamp_on = cats_manifold(p, {"w": [1]})
print(f"cat's manifold for w=1 has {len(lamp_on)} sections:")
for s in lamp_on:
    print("  ", {k: s[k] for k in ("u", "v", "w")})
