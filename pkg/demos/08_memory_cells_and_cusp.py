"""Memory cells and the cusp of the cubic cell.

Parameter counts for the four families on a small grid, a short MGU2
trajectory, and the discriminant curve 4u^3 + 27v^2 = 0 separating the
one-root and three-root regimes of z^3 + u z + v.
"""

import random

import numpy as np

from sheafnet.dynamics import (
    MGU2Params,
    PARAM_COUNTS,
    braid_relation_check,
    cubic_roots,
    default_braid_rep,
    discriminant,
    mgu2_step,
)

for cell, formula in PARAM_COUNTS.items():
    print(f"{cell:>6}: m=2,n=3 -> {formula(2, 3)} parameters")

rng = random.Random(0)
p = MGU2Params.init(2, 2, rng)
h = np.zeros(2)
print("\nMGU2 trajectory from h=0:")
for step in range(4):
    x = np.array([rng.uniform(-1, 1), rng.uniform(-1, 1)])
    h = mgu2_step(p, x, h)
    print(f"  step {step}: h = {np.round(h, 4)}")

print("\ncubic regimes:")
for u, v in [(-1.0, 0.0), (0.0, 1.0), (-3.0, 2.0)]:
    kind, delta = discriminant(u, v)
    print(f"  u={u:+.1f} v={v:+.1f}: delta={delta:+.1f} {kind}, "
          f"roots={np.round(cubic_roots(u, v), 6)}")

report = braid_relation_check(default_braid_rep())
print("\nbraid relation s1s2s1 = s2s1s2:", report.relation_holds,
      "| (s1s2)^3 =", report.center_kind)
