"""Random recursive trees: generation, spines, subtree sizes and heights."""
from __future__ import annotations

import math

import numpy as np

from firetree import generate_recursive_tree, spinal_decomposition, subtree_size, subtree_size_pmf, vertex_height

rng = np.random.default_rng(1)

# vertex v attaches to a uniform earlier vertex
tree = generate_recursive_tree(12, rng)
print(tree.to_text())

# the spine from the root to x cuts the tree into pieces hanging off it
spine = spinal_decomposition(tree, 12)
print("spine to 12:", spine)

# heights grow like ln n
n = 100_000
big = generate_recursive_tree(n, rng)
heights = np.array([vertex_height(big, v) for v in rng.integers(1, n + 1, 2000)])
print(f"mean height / ln n = {heights.mean() / math.log(n):.3f}")

# subtree of vertex v follows an urn law
n, v = 50, 10
sizes = np.array([subtree_size(generate_recursive_tree(n, rng), v) for _ in range(20_000)])
pmf = subtree_size_pmf(n, v)
emp = np.bincount(sizes - 1, minlength=pmf.size) / sizes.size
for ell in range(5):
    print(f"P(|T(10)| = {ell + 1}): simulated {emp[ell]:.4f}, exact {pmf[ell]:.4f}")
