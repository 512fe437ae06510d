"""From an architecture graph to its poset site.

Parses the bundled cells, performs fork surgery, and prints the order
structure: which vertices become tangs, which end up minimal/maximal, and
the loop rank of each graph.
"""

from sheafnet.arch_site import build_poset, classify_vertices, fork_surgery, loop_rank
from sheafnet.data import fixture_graph

for name in ("chain", "diamond", "lstm", "gru", "mgu2"):
    g = fixture_graph(name)
    fg = fork_surgery(g)
    poset = build_poset(fg)
    cls = classify_vertices(poset)
    tips = sorted(v for v, t in cls.primary.items() if t == "tip")
    print(f"== {name}")
    print(f"   vertices={len(g.vertices)}  tangs={len(fg.tangs())}  "
          f"loop rank={loop_rank(g)}")
    print(f"   minimal={sorted(poset.minimal())}")
    print(f"   maximal={sorted(poset.maximal())}")
    print(f"   tips({len(tips)})={tips}")
    print(f"   forest after deleting tangs: {cls.forest_ok}")
