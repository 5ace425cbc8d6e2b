"""The cut-tree of a recursive tree and how marks on it reproduce the fire dynamics."""
from __future__ import annotations

import math

import numpy as np

from firetree import (
    apply_mark_process, build_cut_tree, draw_edge_randomness, fire_outcome_from_marks, generate_recursive_tree,
    reduced_tree, root_cut_count_moments, root_path_blocks, run_fire_dynamics, zeta,
)

rng = np.random.default_rng(3)

tree = generate_recursive_tree(10, rng)
rand = draw_edge_randomness(tree, 0.25, rng)
cut = build_cut_tree(tree, rand)
print("blocks cut off along the root path (size, splitting edge):", root_path_blocks(cut))
print("zeta = number of cuts to isolate the root:", zeta(cut))

# keeping only the topmost marks gives back the burnt blocks exactly
direct = run_fire_dynamics(tree, rand)
via_marks = fire_outcome_from_marks(apply_mark_process(cut, rand))
print("same fates:", np.array_equal(direct.fate, via_marks.fate))

# reduced tree spanned by k random leaves: length L and internal nodes X
L, X = reduced_tree(cut, 2, rng)
print(f"two random leaves: L = {L}, X = {X}")

# exact moments of zeta approach their limits slowly
for m in (100, 1000, 10_000):
    e1, e2 = root_cut_count_moments(m)
    s = math.log(m) / m
    print(f"n={m:>6}: E[zeta ln n/n] = {e1[m] * s:.3f}, E[(zeta ln n/n)^2] = {e2[m] * s * s:.3f}")
