"""Labelled rooted trees in parent-array form and uniform random recursive trees."""
from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels as K


class Tree:
    """Tree on ``{1, ..., n}`` rooted at 1.

    ``parent[v]`` is the parent of ``v`` for ``v >= 2``; slots 0 and 1 hold 0.
    The edge ``{v, parent(v)}`` has id ``v - 2``. Instances are read-only and
    can be shared between threads or processes.
    """

    def __init__(self, parent: np.ndarray | Sequence[int], *, validate: bool = True):
        arr = np.array(parent, dtype=np.int64)
        if arr.ndim != 1 or arr.shape[0] < 2:
            raise ValueError("parent array must have length n + 1 >= 2")
        arr[0] = 0
        arr[1] = 0
        self.n = int(arr.shape[0] - 1)
        arr.setflags(write=False)
        self.parent = arr
        if validate:
            self._check()

    def _check(self) -> None:
        n, par = self.n, self.parent
        if n >= 2:
            body = par[2:]
            if body.min() < 1 or body.max() > n:
                raise ValueError("parent labels must lie in [1, n]")
            if np.any(body == np.arange(2, n + 1)):
                raise ValueError("a vertex cannot be its own parent")
        if self._reached != n:
            raise ValueError("parent array does not describe a tree rooted at 1 (cycle or disconnected)")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Tree:
        """Orient an undirected labelled tree away from vertex 1."""
        if n < 1:
            raise ValueError("n must be >= 1")
        adj: list[list[int]] = [[] for _ in range(n + 1)]
        count = 0
        for a, b in edges:
            if not (1 <= a <= n and 1 <= b <= n) or a == b:
                raise ValueError(f"bad edge {(a, b)}")
            adj[a].append(b)
            adj[b].append(a)
            count += 1
        if count != n - 1:
            raise ValueError(f"a tree on {n} vertices has {n - 1} edges, got {count}")
        parent = [0] * (n + 1)
        seen = [False] * (n + 1)
        seen[1] = True
        stack = [1]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    parent[w] = u
                    stack.append(w)
        if not all(seen[1:]):
            raise ValueError("edge list is not connected")
        return cls(parent)

    @classmethod
    def path(cls, n: int) -> Tree:
        return cls([0, 0] + list(range(1, n)))

    @classmethod
    def star(cls, n: int) -> Tree:
        return cls([0, 0] + [1] * (n - 1))

    # -- derived structure, computed on first use --------------------------

    @cached_property
    def _csr(self) -> tuple[np.ndarray, np.ndarray]:
        return K.children_csr(self.parent)

    @cached_property
    def _bfs(self) -> tuple[np.ndarray, int]:
        ptr, kids = self._csr
        return K.bfs_order(self.parent, ptr, kids)

    @property
    def _reached(self) -> int:
        return int(self._bfs[1])

    @property
    def order(self) -> np.ndarray:
        """Vertices in breadth-first order from the root."""
        return self._bfs[0]

    @cached_property
    def subtree_sizes(self) -> np.ndarray:
        return K.subtree_sizes(self.parent, self.order)

    @cached_property
    def depths(self) -> np.ndarray:
        return K.depths(self.parent, self.order)

    @property
    def num_edges(self) -> int:
        return self.n - 1

    @cached_property
    def is_recursive(self) -> bool:
        return bool(np.all(self.parent[2:] < np.arange(2, self.n + 1)))

    def children(self, v: int) -> np.ndarray:
        ptr, kids = self._csr
        return kids[ptr[v]:ptr[v + 1]]

    def edge_endpoints(self, edge_id: int) -> tuple[int, int]:
        v = edge_id + 2
        return int(self.parent[v]), v

    def edges(self) -> list[tuple[int, int]]:
        return [(int(self.parent[v]), v) for v in range(2, self.n + 1)]

    def check_vertex(self, v: int) -> int:
        if not 1 <= v <= self.n:
            raise ValueError(f"vertex {v} outside [1, {self.n}]")
        return int(v)

    # -- text form ----------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"n={self.n}"]
        lines += [f"{v} {int(self.parent[v])}" for v in range(2, self.n + 1)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Tree:
        rows = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not rows or not rows[0].startswith("n="):
            raise ValueError("missing 'n=<n>' header")
        n = int(rows[0][2:])
        parent = [0] * (n + 1)
        seen = set()
        for row in rows[1:]:
            v, p = (int(x) for x in row.split())
            if not 2 <= v <= n or v in seen:
                raise ValueError(f"bad or repeated vertex line {row!r}")
            seen.add(v)
            parent[v] = p
        if len(seen) != n - 1:
            raise ValueError("expected one line per vertex 2..n")
        return cls(parent)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Tree) and np.array_equal(self.parent, other.parent)

    def __hash__(self) -> int:
        return hash(self.parent.tobytes())

    def __repr__(self) -> str:
        return f"Tree(n={self.n})"


def generate_recursive_tree(n: int, rng: np.random.Generator) -> Tree:
    """Uniform random recursive tree: vertex i attaches to a uniform vertex of [i-1]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    parent = np.zeros(n + 1, dtype=np.int64)
    if n >= 2:
        parent[2:] = rng.integers(1, np.arange(2, n + 1))
    return Tree(parent, validate=False)


def random_recursive_parents(n: int, trials: int, rng: np.random.Generator) -> np.ndarray:
    """``trials`` independent parent arrays stacked as rows, shape ``(trials, n + 1)``."""
    out = np.zeros((trials, n + 1), dtype=np.int64)
    if n >= 2:
        out[:, 2:] = rng.integers(1, np.arange(2, n + 1), size=(trials, n - 1))
    return out


@dataclass(frozen=True)
class SpinalDecomposition:
    target: int
    spine: tuple[int, ...]
    sizes: tuple[int, ...]

    @property
    def height(self) -> int:
        return len(self.spine) - 1


def spinal_decomposition(tree: Tree, x: int) -> SpinalDecomposition:
    """Cut the root-to-``x`` branch out of ``tree``.

    ``sizes[i]`` is the number of vertices left attached to the i-th spine
    vertex once every spine edge is removed.
    """
    x = tree.check_vertex(x)
    spine = [x]
    while spine[-1] != 1:
        spine.append(int(tree.parent[spine[-1]]))
    spine.reverse()
    sub = tree.subtree_sizes
    sizes = [int(sub[a] - sub[b]) for a, b in zip(spine, spine[1:])]
    sizes.append(int(sub[x]))
    return SpinalDecomposition(x, tuple(spine), tuple(sizes))


def subtree_size(tree: Tree, v: int) -> int:
    return int(tree.subtree_sizes[tree.check_vertex(v)])


def vertex_height(tree: Tree, v: int) -> int:
    return int(tree.depths[tree.check_vertex(v)])


def lca_height(tree: Tree, u: int, v: int) -> int:
    """Height of the last common ancestor of ``u`` and ``v`` (root has height 0)."""
    u, v = tree.check_vertex(u), tree.check_vertex(v)
    h = tree.depths
    par = tree.parent
    while h[u] > h[v]:
        u = par[u]
    while h[v] > h[u]:
        v = par[v]
    while u != v:
        u, v = par[u], par[v]
    return int(h[u])
