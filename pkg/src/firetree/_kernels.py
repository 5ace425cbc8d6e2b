"""Compiled inner loops.

Everything here works on flat integer/float arrays with 1-based vertex labels
(index 0 unused) and edge id ``v - 2`` for the edge joining ``v`` to its parent.
The Python-facing modules own validation and randomness; these functions are
deterministic given their inputs.
"""
from __future__ import annotations

import numpy as np
from numba import njit

# edge status codes recorded by the fire sweep
EDGE_RETIRED = 0  # burnt by propagation, never decided
EDGE_FIREPROOF = 1
EDGE_IGNITED = 2


@njit(cache=True)
def children_csr(parent):
    n = parent.shape[0] - 1
    counts = np.zeros(n + 2, dtype=np.int64)
    for v in range(2, n + 1):
        counts[parent[v] + 1] += 1
    ptr = np.zeros(n + 2, dtype=np.int64)
    for v in range(1, n + 1):
        ptr[v + 1] = ptr[v] + counts[v + 1]
    fill = ptr.copy()
    kids = np.empty(max(n - 1, 0), dtype=np.int64)
    for v in range(2, n + 1):
        p = parent[v]
        kids[fill[p]] = v
        fill[p] += 1
    return ptr, kids


@njit(cache=True)
def bfs_order(parent, ptr, kids):
    """Vertices in breadth-first order from the root; unreached slots stay 0."""
    n = parent.shape[0] - 1
    order = np.zeros(n, dtype=np.int64)
    order[0] = 1
    head = 0
    tail = 1
    while head < tail:
        u = order[head]
        head += 1
        for k in range(ptr[u], ptr[u + 1]):
            if tail < n:
                order[tail] = kids[k]
            tail += 1
    return order, tail


@njit(cache=True)
def subtree_sizes(parent, order):
    n = parent.shape[0] - 1
    size = np.ones(n + 1, dtype=np.int64)
    size[0] = 0
    for i in range(n - 1, 0, -1):
        v = order[i]
        size[parent[v]] += size[v]
    return size


@njit(cache=True)
def depths(parent, order):
    n = parent.shape[0] - 1
    h = np.zeros(n + 1, dtype=np.int64)
    for i in range(1, n):
        v = order[i]
        h[v] = h[parent[v]] + 1
    return h


@njit(cache=True)
def root_cut_count(parent, order, priority):
    """Number of cuts that hit the root component when edges are removed by
    increasing priority.

    Edge ``{v, parent(v)}`` is removed while attached to the root iff its
    priority beats every priority on the path from the root to ``parent(v)``.
    """
    n = parent.shape[0] - 1
    best = np.empty(n + 1, dtype=np.float64)
    best[1] = np.inf
    count = 0
    for i in range(1, n):
        v = order[i]
        pv = priority[v - 2]
        m = best[parent[v]]
        if pv < m:
            count += 1
            best[v] = pv
        else:
            best[v] = m
    return count


@njit(cache=True)
def fire_sweep(parent, ptr, kids, priority, marks):
    """Run the fire dynamics once.

    Returns ``(fate, status, fire_edge, fire_theta, fire_size, block_vertices)``.
    ``fate[v]`` is 0 for a fireproof vertex and ``j >= 1`` if burnt by fire j.
    ``block_vertices`` concatenates the burnt blocks in fire order.
    """
    n = parent.shape[0] - 1
    m = n - 1
    fate = np.zeros(n + 1, dtype=np.int64)
    status = np.zeros(m, dtype=np.int8)
    order = np.argsort(priority, kind="mergesort")
    fire_edge = np.empty(m, dtype=np.int64)
    fire_theta = np.empty(m, dtype=np.int64)
    fire_size = np.empty(m, dtype=np.int64)
    block = np.empty(n, dtype=np.int64)
    nb = 0
    nf = 0
    theta = 0
    for t in range(m):
        e = order[t]
        v = e + 2
        if fate[v] != 0:
            continue
        if not marks[e]:
            status[e] = EDGE_FIREPROOF
            theta += 1
            continue
        nf += 1
        status[e] = EDGE_IGNITED
        start = nb
        fate[v] = nf
        block[nb] = v
        nb += 1
        head = start
        while head < nb:
            u = block[head]
            head += 1
            if u != 1:
                pu = parent[u]
                if status[u - 2] != EDGE_FIREPROOF and fate[pu] == 0:
                    fate[pu] = nf
                    block[nb] = pu
                    nb += 1
            for k in range(ptr[u], ptr[u + 1]):
                c = kids[k]
                if status[c - 2] != EDGE_FIREPROOF and fate[c] == 0:
                    fate[c] = nf
                    block[nb] = c
                    nb += 1
        fire_edge[nf - 1] = e
        fire_theta[nf - 1] = theta
        fire_size[nf - 1] = nb - start
    return (fate, status, fire_edge[:nf].copy(), fire_theta[:nf].copy(),
            fire_size[:nf].copy(), block[:nb].copy())


@njit(cache=True)
def fireproof_component_sizes(parent, order, fate):
    """Sizes of the components of the forest induced on unburnt vertices."""
    n = parent.shape[0] - 1
    comp = np.zeros(n + 1, dtype=np.int64)
    size = np.zeros(n + 1, dtype=np.int64)
    k = 0
    for i in range(n):
        v = order[i]
        if fate[v] != 0:
            continue
        p = parent[v]
        if v != 1 and fate[p] == 0:
            comp[v] = comp[p]
        else:
            k += 1
            comp[v] = k
        size[comp[v]] += 1
    return size[1:k + 1].copy()


@njit(cache=True)
def _find(uf, x):
    root = x
    while uf[root] != root:
        root = uf[root]
    while uf[x] != root:
        nxt = uf[x]
        uf[x] = root
        x = nxt
    return root


@njit(cache=True)
def build_cut(parent, priority):
    """Cut-tree by coalescence: add edges by decreasing priority.

    Nodes ``0..n-1`` are the leaves (vertex ``v`` is node ``v-1``); node
    ``n + t`` is created by the t-th merge. The root is node ``2n-2``.
    Returns ``(left, right, up, size, split_edge, leaf_order, lo, depth)``.
    """
    n = parent.shape[0] - 1
    total = 2 * n - 1
    left = np.full(total, -1, dtype=np.int64)
    right = np.full(total, -1, dtype=np.int64)
    up = np.full(total, -1, dtype=np.int64)
    size = np.ones(total, dtype=np.int64)
    split = np.full(total, -1, dtype=np.int64)
    uf = np.arange(n + 1)
    top = np.empty(n + 1, dtype=np.int64)  # uf root -> current cut-tree node
    for v in range(1, n + 1):
        top[v] = v - 1
    order = np.argsort(priority, kind="mergesort")
    node = n
    for t in range(n - 2, -1, -1):
        e = order[t]
        a = _find(uf, e + 2)
        b = _find(uf, parent[e + 2])
        na = top[a]
        nb = top[b]
        left[node] = nb  # side of parent(v) first
        right[node] = na
        up[na] = node
        up[nb] = node
        size[node] = size[na] + size[nb]
        split[node] = e
        if size[na] > size[nb]:
            uf[b] = a
            top[a] = node
        else:
            uf[a] = b
            top[b] = node
        node += 1
    # lay the leaves out left to right; every node owns a contiguous interval
    lo = np.zeros(total, dtype=np.int64)
    depth = np.zeros(total, dtype=np.int64)
    leaf_order = np.empty(n, dtype=np.int64)
    stack = np.empty(total, dtype=np.int64)
    sp = 0
    stack[sp] = total - 1
    sp += 1
    while sp > 0:
        sp -= 1
        x = stack[sp]
        if left[x] < 0:
            leaf_order[lo[x]] = x + 1
            continue
        l = left[x]
        r = right[x]
        lo[l] = lo[x]
        lo[r] = lo[x] + size[l]
        depth[l] = depth[x] + 1
        depth[r] = depth[x] + 1
        stack[sp] = r
        sp += 1
        stack[sp] = l
        sp += 1
    return left, right, up, size, split, leaf_order, lo, depth


@njit(cache=True)
def batch_small_fires(parents, priorities, marks):
    """Fire dynamics for a stack of small trees; returns (I, b0, root_fire)."""
    trials = parents.shape[0]
    n = parents.shape[1] - 1
    out_i = np.empty(trials, dtype=np.int64)
    out_b0 = np.empty(trials, dtype=np.int64)
    out_rf = np.empty(trials, dtype=np.int64)
    for t in range(trials):
        parent = parents[t]
        ptr, kids = children_csr(parent)
        fate, status, fe, ft, fs, blk = fire_sweep(parent, ptr, kids, priorities[t], marks[t])
        burnt = 0
        for j in range(fs.shape[0]):
            burnt += fs[j]
        out_i[t] = n - burnt
        rf = fate[1]
        out_rf[t] = rf
        out_b0[t] = fs[rf - 1] if rf > 0 else 0
    return out_i, out_b0, out_rf


@njit(cache=True)
def descendants_of(parent, v):
    """Subtree size of ``v`` in a recursive tree (labels increase downward)."""
    n = parent.shape[0] - 1
    inside = np.zeros(n + 1, dtype=np.bool_)
    inside[v] = True
    count = 1
    for u in range(v + 1, n + 1):
        if inside[parent[u]]:
            inside[u] = True
            count += 1
    return count


@njit(cache=True)
def same_top_branch(parent, u, v):
    """True iff ``u`` and ``v`` lie below the same child of the root."""
    if u == 1 or v == 1:
        return False
    while parent[u] != 1:
        u = parent[u]
    while parent[v] != 1:
        v = parent[v]
    return u == v


@njit(cache=True)
def mark_filter(up, raw):
    """Keep a raw mark only if no strict ancestor is marked; returns (marked, covered)."""
    total = up.shape[0]
    marked = np.zeros(total, dtype=np.bool_)
    covered = np.zeros(total, dtype=np.bool_)
    # parents always carry larger indices than their children
    for x in range(total - 1, -1, -1):
        u = up[x]
        above = covered[u] if u >= 0 else False
        marked[x] = raw[x] and not above
        covered[x] = above or marked[x]
    return marked, covered
