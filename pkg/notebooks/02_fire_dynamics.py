"""One run of the fire dynamics, then the three regimes side by side."""
from __future__ import annotations

import math

import numpy as np

from firetree import draw_edge_randomness, generate_recursive_tree, largest_fireproof_component, run_fire_dynamics

rng = np.random.default_rng(2)

# redraw until the small example shows more than one fire
n = 20
while True:
    tree = generate_recursive_tree(n, rng)
    out = run_fire_dynamics(tree, draw_edge_randomness(tree, 0.1, rng))
    if out.num_fires >= 2:
        break
print("fate per vertex (0 = fireproof, j = burnt by fire j):", out.fate[1:].tolist())
print("fires:", out.num_fires, "sizes:", out.fire_size.tolist(), "theta:", out.fire_theta.tolist())
print("fireproof vertices I =", out.I, "largest fireproof component =", largest_fireproof_component(out))

# p = 1/n keeps almost everything, p = c ln n / n keeps a random fraction, p = (ln n)^2 / n burns most
n = 100_000
ln = math.log(n)
for label, p in (("supercritical", 1 / n), ("critical c=1", ln / n), ("subcritical", ln * ln / n)):
    frac = []
    for _ in range(40):
        t = generate_recursive_tree(n, rng)
        frac.append(run_fire_dynamics(t, draw_edge_randomness(t, p, rng)).I / n)
    print(f"{label:>14}: mean I/n = {np.mean(frac):.3f}")
