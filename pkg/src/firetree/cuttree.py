"""Cut-trees: the binary genealogy of blocks produced by deleting a tree's
edges one at a time, plus the root-first mark filter that couples them with
the fire dynamics.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels as K
from .dynamics import EdgeRandomness, FireOutcome
from .tree import Tree


@dataclass(eq=False)
class CutTree:
    """Node arena of a cut-tree.

    Leaves are nodes ``0..n-1`` (vertex ``v`` is node ``v - 1``); internal
    nodes follow, the root being ``2n - 2``. Block of node ``x`` is
    ``leaf_order[lo[x]:lo[x] + size[x]]``; ``split_edge[x]`` is the edge whose
    removal splits it (the lowest priority inside the block), -1 on leaves.
    """

    tree: Tree
    priority: np.ndarray
    left: np.ndarray
    right: np.ndarray
    up: np.ndarray
    size: np.ndarray
    split_edge: np.ndarray
    leaf_order: np.ndarray
    lo: np.ndarray
    depth: np.ndarray

    @property
    def n(self) -> int:
        return self.tree.n

    @property
    def root(self) -> int:
        return 2 * self.n - 2

    @property
    def num_nodes(self) -> int:
        return 2 * self.n - 1

    def is_leaf(self, x: int) -> bool:
        return x < self.n

    def leaf(self, v: int) -> int:
        return v - 1

    def block(self, x: int) -> np.ndarray:
        return self.leaf_order[self.lo[x]:self.lo[x] + self.size[x]]

    def children(self, x: int) -> tuple[int, int] | None:
        if x < self.n:
            return None
        return int(self.left[x]), int(self.right[x])

    @cached_property
    def split_priority(self) -> np.ndarray:
        out = np.full(self.num_nodes, np.inf)
        internal = self.split_edge >= 0
        out[internal] = self.priority[self.split_edge[internal]]
        return out


def build_cut_tree(tree: Tree, randomness: EdgeRandomness) -> CutTree:
    randomness.check_for(tree)
    prio = np.ascontiguousarray(randomness.priority, dtype=np.float64)
    if tree.n == 1:
        one = np.array([-1])
        return CutTree(tree, prio, one, one.copy(), one.copy(), np.array([1]), one.copy(),
                       np.array([1]), np.array([0]), np.array([0]))
    parts = K.build_cut(tree.parent, prio)
    return CutTree(tree, prio, *parts)


@dataclass(eq=False)
class MarkedCutTree:
    cut: CutTree
    marked: np.ndarray  # bool per node
    marks: np.ndarray  # raw per-edge marks used
    covered: np.ndarray  # bool per node: marked weak ancestor exists

    def marked_nodes(self) -> np.ndarray:
        return np.flatnonzero(self.marked)


def apply_mark_process(cut: CutTree, randomness: EdgeRandomness) -> MarkedCutTree:
    """Mark internal node iff its splitting edge carries a fire mark and no strict
    ancestor is marked."""
    marks = np.asarray(randomness.marks, dtype=np.bool_)
    raw = np.zeros(cut.num_nodes, dtype=np.bool_)
    internal = cut.split_edge >= 0
    raw[internal] = marks[cut.split_edge[internal]]
    marked, covered = K.mark_filter(cut.up, raw)
    return MarkedCutTree(cut, marked, marks, covered)


def fire_outcome_from_marks(marked: MarkedCutTree) -> FireOutcome:
    """Read the fire dynamics off a marked cut-tree."""
    cut = marked.cut
    tree = cut.tree
    n = cut.n
    nodes = marked.marked_nodes()
    prio = cut.split_priority
    nodes = nodes[np.argsort(prio[nodes], kind="mergesort")]
    fate = np.zeros(n + 1, dtype=np.int64)
    sizes = cut.size[nodes].astype(np.int64)
    blocks = []
    for j, x in enumerate(nodes, start=1):
        b = cut.block(x)
        fate[b] = j
        blocks.append(b)
    # a fireproof decision is an internal node outside every marked subtree
    free = (~marked.covered) & (cut.split_edge >= 0)
    free_prio = np.sort(prio[free])
    theta = np.searchsorted(free_prio, prio[nodes]).astype(np.int64)
    block_vertices = np.concatenate(blocks).astype(np.int64) if blocks else np.zeros(0, dtype=np.int64)
    comps = K.fireproof_component_sizes(tree.parent, tree.order, fate) if n > 1 else np.array([1])
    state = np.full(max(n - 1, 0), K.EDGE_RETIRED, dtype=np.int8)
    state[cut.split_edge[free]] = K.EDGE_FIREPROOF
    state[cut.split_edge[nodes]] = K.EDGE_IGNITED
    return FireOutcome(n, fate, cut.split_edge[nodes].astype(np.int64), theta, sizes,
                       block_vertices, comps, state)


def zeta(cut: CutTree) -> int:
    """Depth of the leaf {1}: the number of cuts needed to isolate the root."""
    return int(cut.depth[0])


def root_cut_count(tree: Tree, randomness: EdgeRandomness) -> int:
    """Same value as ``zeta(build_cut_tree(tree, randomness))`` in O(n), without the cut-tree."""
    randomness.check_for(tree)
    if tree.n == 1:
        return 0
    return int(K.root_cut_count(tree.parent, tree.order,
                                np.ascontiguousarray(randomness.priority, dtype=np.float64)))


def root_path_blocks(cut: CutTree) -> list[tuple[int, int]]:
    """``(|C'_i|, |C_i|)`` along the path from the root block to {1}."""
    path = []
    x = 0
    while cut.up[x] >= 0:
        path.append(x)
        x = int(cut.up[x])
    out = []
    for child in reversed(path):
        sib_l, sib_r = cut.left[cut.up[child]], cut.right[cut.up[child]]
        other = sib_r if sib_l == child else sib_l
        out.append((int(cut.size[other]), int(cut.size[child])))
    return out


def reduced_tree(cut: CutTree, k: int, rng: np.random.Generator | None = None, *,
                 leaves=None, replace: bool = True) -> tuple[int, int]:
    """Length ``L`` and internal-node count ``X`` of the cut-tree spanned by its
    root and ``k`` random leaves.

    Leaves are uniform with replacement unless ``replace=False``; pass
    ``leaves`` (vertex labels) to fix them instead.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if leaves is None:
        if rng is None:
            raise ValueError("need rng or explicit leaves")
        leaves = rng.choice(cut.n, size=k, replace=replace) + 1
    leaves = np.asarray(leaves, dtype=np.int64)
    if leaves.shape[0] != k:
        raise ValueError("len(leaves) must equal k")
    seen = set()
    for v in leaves:
        x = int(v) - 1
        while x >= 0 and x not in seen:
            seen.add(x)
            x = int(cut.up[x])
    length = len(seen) - 1
    internal = sum(1 for x in seen if x >= cut.n)
    return length, internal


def root_cut_count_moments(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Exact ``E[zeta(m)]`` and ``E[zeta(m)^2]`` for uniform recursive trees, ``m = 0..n``.

    The first cut removes a subtree of size ``k`` with probability
    ``m / ((m - 1) k (k + 1))`` and leaves a fresh recursive tree on ``m - k``
    vertices, which gives an O(n^2) recursion; n = 10^5 takes about 20 s.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    e1 = np.zeros(n + 1)
    e2 = np.zeros(n + 1)
    k = np.arange(1, n + 1, dtype=np.float64)
    w = 1.0 / (k * (k + 1.0))
    for m in range(2, n + 1):
        ww = w[:m - 1] * (m / (m - 1))
        a = ww @ e1[m - 1:0:-1]
        e1[m] = 1.0 + a
        e2[m] = 1.0 + 2.0 * a + ww @ e2[m - 1:0:-1]
    return e1, e2
