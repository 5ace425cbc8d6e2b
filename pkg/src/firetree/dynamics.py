"""Fire dynamics on a tree.

Edges are decided one at a time in a uniform random order. A decided edge is
fireproof with probability ``1 - p`` (it is deleted) or set on fire with
probability ``p``, in which case its whole current flammable component burns
at once. Edges burnt by propagation are never decided.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from . import _kernels as K
from .tree import Tree


class EdgeState(IntEnum):
    RETIRED = K.EDGE_RETIRED
    FIREPROOF = K.EDGE_FIREPROOF
    IGNITED = K.EDGE_IGNITED


@dataclass(frozen=True)
class EdgeRandomness:
    """Per-edge priority (decision time) and Bernoulli(p) fire mark."""

    priority: np.ndarray
    marks: np.ndarray
    p: float = float("nan")

    def __post_init__(self):
        if self.priority.shape != self.marks.shape or self.priority.ndim != 1:
            raise ValueError("priority and marks must be 1-d arrays of equal length")

    @property
    def num_edges(self) -> int:
        return int(self.priority.shape[0])

    def check_for(self, tree: Tree) -> None:
        if self.num_edges != tree.num_edges:
            raise ValueError(f"randomness sized for {self.num_edges} edges, tree has {tree.num_edges}")

    @classmethod
    def from_order(cls, order, marks, p: float = float("nan")) -> EdgeRandomness:
        """Build randomness whose priority ranks follow ``order`` (edge ids, first decided first)."""
        order = np.asarray(order, dtype=np.int64)
        prio = np.empty(order.shape[0], dtype=np.float64)
        prio[order] = (np.arange(order.shape[0]) + 0.5) / max(order.shape[0], 1)
        return cls(prio, np.asarray(marks, dtype=np.bool_), p)


def draw_edge_randomness(tree: Tree, p: float, rng: np.random.Generator) -> EdgeRandomness:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    m = tree.num_edges
    priority = rng.random(m)
    marks = rng.random(m) < p
    return EdgeRandomness(priority, marks, float(p))


@dataclass(frozen=True)
class FireEvent:
    ignited_edge_id: int
    theta: int
    block: frozenset[int] | None
    size: int


@dataclass(eq=False)
class FireOutcome:
    """Everything a single run of the dynamics produces.

    ``fate[v]`` is 0 when ``v`` is fireproof and ``j`` when ``v`` was burnt
    by the j-th fire (1-based). Fire ``j`` is described by ``fire_edge[j-1]``,
    ``fire_theta[j-1]`` (fireproof decisions made before it) and
    ``fire_size[j-1]``; its vertices are ``block_vertices`` between
    ``block_ptr[j-1]`` and ``block_ptr[j]``.
    """

    n: int
    fate: np.ndarray
    fire_edge: np.ndarray
    fire_theta: np.ndarray
    fire_size: np.ndarray
    block_vertices: np.ndarray | None
    fireproof_components: np.ndarray
    edge_state: np.ndarray | None = None
    block_cap: int | None = field(default=None, repr=False)

    @property
    def num_fires(self) -> int:
        return int(self.fire_size.shape[0])

    @property
    def I(self) -> int:  # noqa: E743 - matches the usual notation
        return self.n - int(self.fire_size.sum())

    @property
    def root_fire_index(self) -> int | None:
        j = int(self.fate[1])
        return j if j > 0 else None

    @property
    def b0(self) -> int:
        j = self.root_fire_index
        return 0 if j is None else int(self.fire_size[j - 1])

    @property
    def block_ptr(self) -> np.ndarray:
        return np.concatenate(([0], np.cumsum(self.fire_size)))

    def block(self, j: int) -> frozenset[int] | None:
        """Vertex set burnt by fire ``j`` (1-based), or None if above the size cap."""
        if not 1 <= j <= self.num_fires:
            raise IndexError(j)
        size = int(self.fire_size[j - 1])
        if self.block_cap is not None and size > self.block_cap:
            return None
        if self.block_vertices is None:
            return frozenset(int(v) for v in np.flatnonzero(self.fate == j))
        ptr = self.block_ptr
        return frozenset(int(v) for v in self.block_vertices[ptr[j - 1]:ptr[j]])

    @property
    def fires(self) -> list[FireEvent]:
        return [
            FireEvent(int(self.fire_edge[j]), int(self.fire_theta[j]), self.block(j + 1), int(self.fire_size[j]))
            for j in range(self.num_fires)
        ]

    def is_fireproof(self, v: int) -> bool:
        return self.fate[v] == 0

    def same_as(self, other: FireOutcome) -> bool:
        """Field-by-field equality (fates, blocks, order, times, fireproof forest)."""
        return (
            self.n == other.n
            and np.array_equal(self.fate, other.fate)
            and np.array_equal(self.fire_edge, other.fire_edge)
            and np.array_equal(self.fire_theta, other.fire_theta)
            and np.array_equal(self.fire_size, other.fire_size)
            and all(self.block(j) == other.block(j) for j in range(1, self.num_fires + 1))
            and np.array_equal(np.sort(self.fireproof_components), np.sort(other.fireproof_components))
            and (self.edge_state is None or other.edge_state is None
                 or np.array_equal(self.edge_state, other.edge_state))
        )

    def summary_row(self, K: int = 8) -> dict:
        """Flat record used for CSV output; ``theta_i``/``b_i`` beyond the last fire are None."""
        row = {
            "n": self.n,
            "I_n": self.I,
            "b0": self.b0,
            "root_fire_index": self.root_fire_index,
            "num_fires": self.num_fires,
            "f1_down": largest_fireproof_component(self),
        }
        for i in range(K):
            row[f"theta_{i + 1}"] = int(self.fire_theta[i]) if i < self.num_fires else None
        for i in range(K):
            row[f"b_{i + 1}"] = int(self.fire_size[i]) if i < self.num_fires else None
        return row


def run_fire_dynamics(tree: Tree, randomness: EdgeRandomness, *, block_cap: int | None = None) -> FireOutcome:
    randomness.check_for(tree)
    if tree.n == 1:
        empty = np.zeros(0, dtype=np.int64)
        return FireOutcome(1, np.zeros(2, dtype=np.int64), empty, empty, empty, empty,
                           np.array([1]), np.zeros(0, dtype=np.int8), block_cap)
    ptr, kids = tree._csr
    fate, status, fe, ft, fs, blk = K.fire_sweep(
        tree.parent, ptr, kids,
        np.ascontiguousarray(randomness.priority, dtype=np.float64),
        np.ascontiguousarray(randomness.marks, dtype=np.bool_),
    )
    comps = K.fireproof_component_sizes(tree.parent, tree.order, fate)
    return FireOutcome(tree.n, fate, fe, ft, fs, blk, comps, status, block_cap)


def same_fireproof_component(outcome: FireOutcome, tree: Tree, u: int, v: int) -> bool:
    """Whether ``u`` and ``v`` lie in one component of the fireproof forest."""
    u, v = tree.check_vertex(u), tree.check_vertex(v)
    fate, par, h = outcome.fate, tree.parent, tree.depths
    if fate[u] or fate[v]:
        return False
    while h[u] > h[v]:
        u = par[u]
        if fate[u]:
            return False
    while h[v] > h[u]:
        v = par[v]
        if fate[v]:
            return False
    while u != v:
        u, v = par[u], par[v]
        if fate[u] or fate[v]:
            return False
    return True


def largest_fireproof_component(outcome: FireOutcome) -> int:
    comps = outcome.fireproof_components
    return int(comps.max()) if comps.size else 0
