"""Auxiliary random walks and urns.

* the heavy-tailed walk with steps ``P(xi = k) = 1/(k(k+1))``,
* its last-passage time below a level and the undershoot,
* discrete stick-breaking and size-biased picks,
* the beta-binomial law of subtree sizes in a random recursive tree,
* the spine cut count that appears when a branch must stay fireproof.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .tree import generate_recursive_tree, spinal_decomposition


def xi_from_uniform(u):
    """``floor(1/u)``; maps a uniform on (0, 1) onto the step law exactly."""
    return np.floor(1.0 / np.asarray(u)).astype(np.int64)


def sample_xi(rng: np.random.Generator, size=None):
    """Draw steps with ``P(xi = k) = 1 / (k (k + 1))``."""
    u = rng.random(size)
    # Generator.random is on [0, 1); 0 has probability 2**-53 per draw, resample it
    if size is None:
        while u == 0.0:
            u = rng.random()
        return int(math.floor(1.0 / u))
    u = np.asarray(u)
    zero = u == 0.0
    while zero.any():
        u[zero] = rng.random(int(zero.sum()))
        zero = u == 0.0
    return xi_from_uniform(u)


def xi_pmf(k):
    k = np.asarray(k, dtype=np.float64)
    return 1.0 / (k * (k + 1.0))


@dataclass(frozen=True)
class WalkPath:
    """Walk stopped at its first passage at or above ``level``.

    ``steps`` holds ``xi_1..xi_lambda``; ``overshoot_step`` is the step that
    crossed the level. ``degenerate`` flags ``xi_1 >= level`` where the
    last-passage time is undefined; then ``lam = 0`` and ``undershoot = level``.
    """

    level: int
    steps: np.ndarray
    overshoot_step: int

    @property
    def lam(self) -> int:
        return int(self.steps.shape[0])

    @property
    def partial_sums(self) -> np.ndarray:
        return np.cumsum(self.steps)

    @property
    def undershoot(self) -> int:
        return self.level - int(self.steps.sum())

    @property
    def degenerate(self) -> bool:
        return self.lam == 0


def run_walk_to(n: int, rng: np.random.Generator) -> WalkPath:
    if n < 2:
        raise ValueError("level n must be >= 2")
    # S_k ~ k ln k, so about n / ln n steps are needed; draw in blocks
    block = max(16, int(1.2 * n / math.log(n)) + 16)
    chunks = []
    total = 0
    while True:
        xs = sample_xi(rng, block)
        sums = total + np.cumsum(xs)
        hit = int(np.searchsorted(sums, n, side="left"))
        if hit < block:
            chunks.append(xs[:hit])
            steps = np.concatenate(chunks)
            return WalkPath(n, steps, int(xs[hit]))
        chunks.append(xs)
        total = int(sums[-1])
        block = max(16, block // 4)


def max_step_measure(path: WalkPath, n: int | None = None, eps: float = 0.1) -> np.ndarray:
    """Scaled steps ``(ln n / n) xi_i`` that exceed ``eps``, in walk order."""
    n = path.level if n is None else n
    scaled = path.steps * (math.log(n) / n)
    return scaled[scaled > eps]


@dataclass(frozen=True)
class StickBreaking:
    parts: tuple[int, ...]

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def kappa(self) -> int:
        return len(self.parts) - 1


def stick_breaking(n: int, rng: np.random.Generator) -> StickBreaking:
    """Take a uniform piece of what is left until nothing is left."""
    if n < 1:
        raise ValueError("n must be >= 1")
    parts = []
    rest = n
    while rest > 0:
        s = int(rng.integers(1, rest + 1))
        parts.append(s)
        rest -= s
    return StickBreaking(tuple(parts))


def size_biased_pick(parts: StickBreaking | tuple[int, ...], rng: np.random.Generator) -> int:
    sizes = np.asarray(parts.parts if isinstance(parts, StickBreaking) else parts, dtype=np.int64)
    if sizes.size == 0 or sizes.min() < 1:
        raise ValueError("need a nonempty sequence of positive parts")
    u = int(rng.integers(0, int(sizes.sum())))
    return int(sizes[np.searchsorted(np.cumsum(sizes), u, side="right")])


def root_subtree_sizes(parent: np.ndarray) -> tuple[int, ...]:
    """Sizes of the trees left after deleting vertex 1, ordered by their smallest label.

    Expects a recursive labelling (``parent[v] < v``).
    """
    n = parent.shape[0] - 1
    top = np.zeros(n + 1, dtype=np.int64)
    counts: dict[int, int] = {}
    for v in range(2, n + 1):
        p = parent[v]
        top[v] = v if p == 1 else top[p]
        counts[int(top[v])] = counts.get(int(top[v]), 0) + 1
    return tuple(counts[k] for k in sorted(counts))


def subtree_size_pmf(n: int, v: int) -> np.ndarray:
    """``pmf[ell] = P(|subtree of v| = ell + 1)`` for ``ell = 0..n-v`` in a uniform RRT.

    Evaluated as ``(v-1)/(n-1-ell) * prod_{i<ell} (1 - (v-1)/(n-1-i))`` with
    the product accumulated in log space, which keeps the relative error near
    machine precision for n in the millions.
    """
    if not 2 <= v <= n:
        raise ValueError("need 2 <= v <= n")
    ell = np.arange(n - v + 1, dtype=np.float64)
    log_ratio = np.log1p(-(v - 1) / (n - 1 - ell[:-1])) if n > v else np.zeros(0)
    log_prod = np.concatenate(([0.0], np.cumsum(log_ratio)))
    return (v - 1) / (n - 1 - ell) * np.exp(log_prod)


def beta_binomial_pmf(n: int, v: int, ell: int) -> float:
    """``P(|subtree of v| = ell + 1)`` in a uniform random recursive tree on [n]."""
    if not 2 <= v <= n or not 0 <= ell <= n - v:
        raise ValueError(f"need 2 <= v <= n and 0 <= ell <= n - v, got n={n}, v={v}, ell={ell}")
    if ell == 0:
        return (v - 1) / (n - 1)
    i = np.arange(ell, dtype=np.float64)
    log_prod = float(np.sum(np.log1p(-(v - 1) / (n - 1 - i))))
    return (v - 1) / (n - 1 - ell) * math.exp(log_prod)


def _zeta_of_fresh_rrt(size: int, rng: np.random.Generator) -> int:
    if size == 1:
        return 0
    t = generate_recursive_tree(size, rng)
    return int(K.root_cut_count(t.parent, t.order, rng.random(size - 1)))


def spine_cut_counts(n: int, trials: int, rng: np.random.Generator) -> np.ndarray:
    """Samples of ``h(X) + sum_i zeta_i(|T_i|)`` for a uniform vertex X of an RRT.

    Each spinal component gets its own independent recursive tree and removal
    order, as licensed by the conditional independence of the pieces.
    """
    out = np.empty(trials, dtype=np.int64)
    for t in range(trials):
        tree = generate_recursive_tree(n, rng)
        x = int(rng.integers(1, n + 1))
        spine = spinal_decomposition(tree, x)
        out[t] = spine.height + sum(_zeta_of_fresh_rrt(s, rng) for s in spine.sizes)
    return out


def spine_cut_count_estimate(n: int, trials: int, rng: np.random.Generator) -> np.ndarray:
    """Scaled spine cut counts ``(ln n / n) (h(X) + sum zeta_i(|T_i|))``."""
    return spine_cut_counts(n, trials, rng) * (math.log(n) / n)


__all__ = [
    "WalkPath", "StickBreaking", "sample_xi", "xi_from_uniform", "xi_pmf", "run_walk_to",
    "max_step_measure", "stick_breaking", "size_biased_pick", "root_subtree_sizes",
    "subtree_size_pmf", "beta_binomial_pmf", "spine_cut_counts", "spine_cut_count_estimate",
]
