"""Reference limit laws and the probabilities that the root burns with the j-th fire."""
from __future__ import annotations

import math

import numpy as np

from firetree import TruncatedExpWithAtom, ks_statistic, moment_eps_min_one, q_j, sample_reference
from firetree.laws import q_j_monte_carlo, root_fire_probabilities

rng = np.random.default_rng(5)

law = TruncatedExpWithAtom(1.0)
x = sample_reference(law, rng, 100_000)
print(f"mass of the atom at 1: {np.mean(x == 1):.4f} (exp(-1) = {math.exp(-1):.4f})")
print(f"KS of the sample against its own law: {ks_statistic(x, law):.4f}")
print(f"E[x^2] = {np.mean(x ** 2):.4f}, quadrature {moment_eps_min_one(1.0, 2):.4f}")

for j in (1, 2, 3, 10, 30):
    print(f"q_{j}(1) = {q_j(1.0, j):.8f}")
m, se = q_j_monte_carlo(1.0, 3, rng, 200_000)
print(f"q_3(1) by simulation: {m:.5f} +- {se:.5f}")
print("P(root burns with fire j), j=1..5:", root_fire_probabilities(1.0, 5).round(4))
