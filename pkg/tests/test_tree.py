from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from firetree import _kernels as K
from firetree.laws import chi_square_test
from firetree.tree import (
    Tree, generate_recursive_tree, lca_height, random_recursive_parents, spinal_decomposition, subtree_size,
    vertex_height,
)
from firetree.walks import subtree_size_pmf


def test_generate_n1_has_no_edges(rng):
    t = generate_recursive_tree(1, rng)
    assert t.n == 1 and t.num_edges == 0 and t.edges() == []


def test_generate_n2_is_forced(rng):
    t = generate_recursive_tree(2, rng)
    assert t.parent[2] == 1


def test_generate_rejects_zero(rng):
    with pytest.raises(ValueError):
        generate_recursive_tree(0, rng)


def test_generate_is_seed_deterministic():
    a = generate_recursive_tree(500, np.random.default_rng(7))
    b = generate_recursive_tree(500, np.random.default_rng(7))
    assert a == b


def test_parent_of_three_is_uniform(rng):
    parents = random_recursive_parents(3, 100_000, rng)
    assert abs(np.mean(parents[:, 3] == 1) - 0.5) <= 0.01


@given(st.integers(1, 300), st.integers(0, 2 ** 32))
@settings(max_examples=60, deadline=None)
def test_generated_trees_are_recursive(n, seed):
    t = generate_recursive_tree(n, np.random.default_rng(seed))
    assert t.is_recursive
    assert t.num_edges == n - 1
    assert np.all(t.parent[2:] < np.arange(2, n + 1))


def test_ingestion_rejects_cycles_and_bad_labels():
    with pytest.raises(ValueError):
        Tree([0, 0, 3, 2])  # 2 <-> 3 cycle, detached from the root
    with pytest.raises(ValueError):
        Tree([0, 0, 5])
    with pytest.raises(ValueError):
        Tree([0, 0, 2])


def test_non_recursive_tree_accepted():
    t = Tree([0, 0, 3, 1])  # 1 - 3 - 2
    assert not t.is_recursive
    assert t.depths[2] == 2


def test_from_edges_orients_from_root():
    t = Tree.from_edges(4, [(3, 4), (1, 3), (2, 3)])
    assert list(t.parent[2:]) == [3, 1, 3]
    with pytest.raises(ValueError):
        Tree.from_edges(4, [(1, 2), (3, 4), (2, 1)])


def test_text_round_trip(rng):
    t = generate_recursive_tree(40, rng)
    text = t.to_text()
    assert text.splitlines()[0] == "n=40"
    assert text.splitlines()[1] == f"2 {t.parent[2]}"
    assert Tree.from_text(text) == t


def test_spine_of_root_is_whole_tree(rng):
    t = generate_recursive_tree(30, rng)
    s = spinal_decomposition(t, 1)
    assert list(s.spine) == [1] and list(s.sizes) == [30] and s.height == 0


def test_spine_of_path_is_singletons():
    s = spinal_decomposition(Tree.path(3), 3)
    assert list(s.spine) == [1, 2, 3]
    assert list(s.sizes) == [1, 1, 1]


@given(st.integers(1, 200), st.integers(0, 2 ** 32), st.data())
@settings(max_examples=60, deadline=None)
def test_spine_sizes_partition_n(n, seed, data):
    t = generate_recursive_tree(n, np.random.default_rng(seed))
    x = data.draw(st.integers(1, n))
    s = spinal_decomposition(t, x)
    assert sum(s.sizes) == n
    assert s.spine[0] == 1 and s.spine[-1] == x
    assert all(t.parent[s.spine[i]] == s.spine[i - 1] for i in range(1, len(s.spine)))
    assert s.height == vertex_height(t, x)


def test_spine_rejects_bad_vertex(rng):
    with pytest.raises(ValueError):
        spinal_decomposition(generate_recursive_tree(5, rng), 6)


def test_subtree_size_edges(rng):
    t = generate_recursive_tree(50, rng)
    assert subtree_size(t, 1) == 50
    assert subtree_size(t, 50) == 1
    with pytest.raises(ValueError):
        subtree_size(t, 0)


def test_subtree_size_n3_v2_is_fair(rng):
    parents = random_recursive_parents(3, 40_000, rng)
    sizes = 1 + (parents[:, 3] == 2)
    assert abs(np.mean(sizes == 1) - 0.5) <= 0.02


def test_subtree_size_law_matches_urn_pmf(rng):
    n, v = 50, 10
    parents = random_recursive_parents(n, 100_000, rng)
    sizes = np.array([K.descendants_of(parents[i], v) for i in range(parents.shape[0])])
    counts = np.bincount(sizes - 1, minlength=n - v + 1)
    rep = chi_square_test(counts, subtree_size_pmf(n, v))
    assert rep.passed, rep.line()


def test_subtree_size_agrees_with_kernel(rng):
    t = generate_recursive_tree(300, rng)
    for v in (1, 2, 17, 150, 300):
        assert subtree_size(t, v) == K.descendants_of(t.parent, v)


def test_lca_height_trivial_cases(rng):
    t = generate_recursive_tree(100, rng)
    for u in (1, 5, 99):
        assert lca_height(t, u, u) == vertex_height(t, u)
        assert lca_height(t, 1, u) == 0


def test_lca_height_on_path():
    t = Tree.path(6)
    assert lca_height(t, 4, 6) == 3


def test_vertex_height_path():
    assert vertex_height(Tree.path(9), 9) == 8
    assert vertex_height(Tree.path(9), 1) == 0


def test_lca_nonroot_probability(rng):
    # many trees with few pairs each: the per-tree probability varies a lot
    n, trees, pairs = 1000, 20_000, 5
    hits = 0
    for chunk in range(trees // 1000):
        parents = random_recursive_parents(n, 1000, rng)
        uv = rng.integers(1, n + 1, size=(1000, pairs, 2))
        for t in range(1000):
            hits += sum(K.same_top_branch(parents[t], int(a), int(b)) for a, b in uv[t])
    assert abs(hits / (trees * pairs) - (n - 1) / (2 * n)) <= 0.01


def test_lca_height_conditional_halving(rng):
    n = 10_000
    hs = []
    for _ in range(100):
        t = generate_recursive_tree(n, rng)
        for _ in range(200):
            hs.append(lca_height(t, int(rng.integers(1, n + 1)), int(rng.integers(1, n + 1))))
    hs = np.array(hs)
    for ell in (0, 1, 2):
        ratio = np.mean(hs >= ell + 1) / np.mean(hs >= ell)
        assert abs(ratio - 0.5) <= 0.05


def test_height_of_uniform_vertex_is_logarithmic(rng):
    n = 100_000
    hs = [vertex_height(generate_recursive_tree(n, rng), int(rng.integers(1, n + 1))) for _ in range(300)]
    assert abs(np.mean(hs) / math.log(n) - 1) <= 0.1


@given(st.integers(2, 150), st.integers(0, 2 ** 32), st.data())
@settings(max_examples=60, deadline=None)
def test_lca_positive_iff_same_top_branch(n, seed, data):
    t = generate_recursive_tree(n, np.random.default_rng(seed))
    u = data.draw(st.integers(1, n))
    v = data.draw(st.integers(1, n))
    assert (lca_height(t, u, v) >= 1) == K.same_top_branch(t.parent, u, v)
