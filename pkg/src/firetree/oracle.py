"""Exact laws of the fire dynamics on very small trees, by exhaustive recursion."""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass

from .tree import Tree

MAX_ORACLE_N = 8
MAX_AVERAGE_N = 6


@dataclass(frozen=True)
class OracleLaw:
    """Exact joint law of ``(I, b0, root_fire_index)``; index 0 means the root never burns."""

    n: int
    joint: dict

    def _marginal(self, pick) -> dict:
        out: dict = defaultdict(int)
        for key, prob in self.joint.items():
            out[pick(key)] += prob
        return dict(sorted(out.items()))

    @property
    def I_pmf(self) -> dict:  # noqa: N802
        return self._marginal(lambda k: k[0])

    @property
    def b0_pmf(self) -> dict:
        return self._marginal(lambda k: k[1])

    @property
    def root_fire_pmf(self) -> dict:
        return self._marginal(lambda k: k[2])

    @property
    def root_burn_probability(self):
        return sum(prob for key, prob in self.joint.items() if key[2] > 0)


def _component(edges: frozenset, ends: dict, e: int) -> tuple[frozenset, frozenset]:
    """Edge set and vertex set of the component of ``alive`` containing edge ``e``."""
    comp_e = {e}
    verts = set(ends[e])
    grew = True
    while grew:
        grew = False
        for f in edges:
            if f not in comp_e and (ends[f][0] in verts or ends[f][1] in verts):
                comp_e.add(f)
                verts.update(ends[f])
                grew = True
    return frozenset(comp_e), frozenset(verts)


def brute_force_I_distribution(tree: Tree, p) -> OracleLaw:
    """Exact law of the dynamics on a fixed tree with at most 8 vertices.

    ``p`` may be a ``fractions.Fraction`` for exact arithmetic. The recursion
    state is the set of edges not yet decided or burnt; keys of the result are
    ``(I, b0, root_fire_index)``.
    """
    n = tree.n
    if n > MAX_ORACLE_N:
        raise ValueError(f"oracle limited to n <= {MAX_ORACLE_N}, got {n}")
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    ends = {v - 2: (v, int(tree.parent[v])) for v in range(2, n + 1)}
    memo: dict[frozenset, dict] = {}

    def law(alive: frozenset) -> dict:
        # (vertices burnt from here on, fire index of the root counted from here, b0)
        if alive in memo:
            return memo[alive]
        if not alive:
            return {(0, 0, 0): 1}
        acc: dict = defaultdict(int)
        m = len(alive)
        for e in alive:
            if p != 1:
                for key, prob in law(alive - {e}).items():
                    acc[key] += (1 - p) * prob / m
            if p != 0:
                comp_e, verts = _component(alive, ends, e)
                size = len(verts)
                root_here = 1 in verts
                for (burnt, rf, b0), prob in law(alive - comp_e).items():
                    if root_here:
                        key = (burnt + size, 1, size)
                    else:
                        key = (burnt + size, rf + 1 if rf else 0, b0)
                    acc[key] += p * prob / m
        memo[alive] = dict(acc)
        return memo[alive]

    start = law(frozenset(ends))
    joint: dict = defaultdict(int)
    for (burnt, rf, b0), prob in start.items():
        joint[(n - burnt, b0, rf)] += prob
    return OracleLaw(n, dict(joint))


def all_recursive_trees(n: int):
    """Every recursive tree on [n], as ``Tree`` objects."""
    for choice in itertools.product(*(range(1, v) for v in range(2, n + 1))):
        yield Tree([0, 0, *choice])


def brute_force_avg_over_trees(n: int, p) -> OracleLaw:
    """Law under a uniform random recursive tree, averaging all ``(n-1)!`` trees."""
    if n > MAX_AVERAGE_N:
        raise ValueError(f"tree average limited to n <= {MAX_AVERAGE_N}, got {n}")
    if n < 1:
        raise ValueError("n must be >= 1")
    trees = list(all_recursive_trees(n))
    joint: dict = defaultdict(int)
    for t in trees:
        for key, prob in brute_force_I_distribution(t, p).joint.items():
            joint[key] += prob / len(trees)
    return OracleLaw(n, dict(joint))
