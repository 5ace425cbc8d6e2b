"""The heavy-tailed walk behind the root path, and the stick-breaking picture of root subtrees."""
from __future__ import annotations

import math

import numpy as np

from firetree import beta_binomial_pmf, max_step_measure, run_walk_to, sample_xi, size_biased_pick, stick_breaking

rng = np.random.default_rng(4)

# P(xi = k) = 1/(k(k+1)): infinite mean
xi = sample_xi(rng, 100_000)
print("P(xi=1), P(xi=2):", np.mean(xi == 1).round(4), np.mean(xi == 2).round(4))

# last passage below n, scaled by ln n / n, concentrates at 1
n = 1_000_000
lam = [run_walk_to(n, rng).lam * math.log(n) / n for _ in range(300)]
print(f"mean lambda ln n / n = {np.mean(lam):.3f}")

# large steps, measured on the n scale, look like a Poisson measure with intensity x^-2 dx
edges = [0.1, 0.2, 0.5, 1.0]
counts = np.array([np.histogram(max_step_measure(run_walk_to(n, rng), n), bins=edges)[0] for _ in range(300)])
print("mean step count on (0.1,0.2], (0.2,0.5], (0.5,1]:", counts.mean(axis=0).round(2), "expected: 5, 3, 1")

# a size-biased pick from the stick-breaking partition of [10] is uniform
picks = [size_biased_pick(stick_breaking(10, rng), rng) for _ in range(50_000)]
print("pick frequencies:", (np.bincount(picks, minlength=11)[1:] / len(picks)).round(3))

print("beta-binomial P(|T_50(10)| - 1 = 0) =", round(beta_binomial_pmf(50, 10, 0), 5))
