from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from firetree import _kernels as K
from firetree.cuttree import reduced_tree, build_cut_tree
from firetree.dynamics import (
    EdgeRandomness, EdgeState, draw_edge_randomness, largest_fireproof_component, run_fire_dynamics,
    same_fireproof_component,
)
from firetree.laws import agreement_test, chi_square_test
from firetree.tree import Tree, generate_recursive_tree, random_recursive_parents


def _run(n, p, seed):
    rng = np.random.default_rng(seed)
    t = generate_recursive_tree(n, rng)
    r = draw_edge_randomness(t, p, rng)
    return t, r, run_fire_dynamics(t, r)


def test_randomness_extremes(rng):
    t = generate_recursive_tree(50, rng)
    assert not draw_edge_randomness(t, 0.0, rng).marks.any()
    assert draw_edge_randomness(t, 1.0, rng).marks.all()
    with pytest.raises(ValueError):
        draw_edge_randomness(t, 1.5, rng)


def test_mark_frequency(rng):
    t = generate_recursive_tree(10_000, rng)
    assert abs(draw_edge_randomness(t, 0.3, rng).marks.mean() - 0.3) <= 0.02


def test_randomness_size_mismatch(rng):
    t = generate_recursive_tree(10, rng)
    with pytest.raises(ValueError):
        run_fire_dynamics(t, EdgeRandomness(np.zeros(3), np.zeros(3, dtype=bool)))


def test_no_marks_means_no_fire(rng):
    t = generate_recursive_tree(100, rng)
    out = run_fire_dynamics(t, EdgeRandomness(rng.random(99), np.zeros(99, dtype=bool)))
    assert out.I == 100 and out.num_fires == 0 and out.root_fire_index is None and out.b0 == 0
    assert largest_fireproof_component(out) == 100
    assert np.all(out.edge_state == EdgeState.FIREPROOF)


def test_all_marks_burn_everything_at_once(rng):
    t = generate_recursive_tree(100, rng)
    out = run_fire_dynamics(t, EdgeRandomness(rng.random(99), np.ones(99, dtype=bool)))
    assert out.num_fires == 1 and out.I == 0
    assert out.block(1) == frozenset(range(1, 101))
    assert out.fire_theta[0] == 0 and out.b0 == 100 and out.root_fire_index == 1
    assert largest_fireproof_component(out) == 0
    assert np.sum(out.edge_state == EdgeState.IGNITED) == 1


def test_single_vertex():
    out = run_fire_dynamics(Tree([0, 0]), EdgeRandomness(np.zeros(0), np.zeros(0, dtype=bool)))
    assert out.I == 1 and out.num_fires == 0


def test_hand_worked_path():
    # path 1-2-3-4, edges e0={1,2}, e1={2,3}, e2={3,4}
    # order: e1 fireproof, e2 fire (burns {3,4}), e0 fire (burns {1,2})
    t = Tree.path(4)
    r = EdgeRandomness.from_order([1, 2, 0], [True, False, True])  # marks by edge id
    out = run_fire_dynamics(t, r)
    assert out.num_fires == 2
    assert out.block(1) == {3, 4} and out.block(2) == {1, 2}
    assert list(out.fire_theta) == [1, 1]
    assert out.root_fire_index == 2 and out.b0 == 2 and out.I == 0


def test_two_vertex_law(rng):
    parents = random_recursive_parents(2, 100_000, rng)
    prio = rng.random((100_000, 1))
    marks = rng.random((100_000, 1)) < 0.3
    I, _, _ = K.batch_small_fires(parents, prio, marks)
    assert abs(np.mean(I == 2) - 0.7) <= 0.01
    assert abs(np.mean(I == 0) - 0.3) <= 0.01


@given(st.integers(1, 250), st.floats(0, 1), st.integers(0, 2 ** 32))
@settings(max_examples=80, deadline=None)
def test_outcome_invariants(n, p, seed):
    t, r, out = _run(n, p, seed)
    fate = out.fate
    # partition
    assert out.I + int(out.fire_size.sum()) == n
    assert out.I == int(np.sum(fate[1:] == 0))
    seen = set()
    for j in range(1, out.num_fires + 1):
        blk = out.block(j)
        assert len(blk) == out.fire_size[j - 1]
        assert not (blk & seen)
        seen |= blk
        # connected: every block vertex but the topmost has its parent inside
        tops = [v for v in blk if v == 1 or t.parent[v] not in blk]
        assert len(tops) == 1
        # the ignited edge lies inside the block
        a, b = t.edge_endpoints(int(out.fire_edge[j - 1]))
        assert a in blk and b in blk
    # theta nondecreasing and bounded
    assert np.all(np.diff(out.fire_theta) >= 0)
    if out.num_fires:
        assert out.fire_theta[0] <= max(n - 1, 0)
    # a vertex is fireproof iff all its incident edges were decided fireproof
    state = out.edge_state
    for v in range(1, n + 1):
        incident = [v - 2] if v > 1 else []
        incident += [int(c) - 2 for c in t.children(v)]
        all_fp = all(state[e] == EdgeState.FIREPROOF for e in incident)
        assert (fate[v] == 0) == all_fp
    assert out.fireproof_components.sum() == out.I
    assert largest_fireproof_component(out) <= out.I
    # theta counts fireproof decisions before each fire
    order = np.argsort(r.priority, kind="mergesort")
    fp_before = np.cumsum(state[order] == EdgeState.FIREPROOF)
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    for j in range(out.num_fires):
        pos = rank[out.fire_edge[j]]
        assert out.fire_theta[j] == (fp_before[pos - 1] if pos > 0 else 0)


@given(st.integers(1, 120), st.floats(0, 1), st.integers(0, 2 ** 32), st.data())
@settings(max_examples=60, deadline=None)
def test_same_component_matches_forest(n, p, seed, data):
    t, _, out = _run(n, p, seed)
    u = data.draw(st.integers(1, n))
    v = data.draw(st.integers(1, n))
    # brute force: union of fireproof-fireproof edges
    comp = list(range(n + 1))

    def find(x):
        while comp[x] != x:
            x = comp[x]
        return x

    for w in range(2, n + 1):
        if out.fate[w] == 0 and out.fate[t.parent[w]] == 0:
            comp[find(w)] = find(int(t.parent[w]))
    expect = out.fate[u] == 0 and out.fate[v] == 0 and find(u) == find(v)
    assert same_fireproof_component(out, t, u, v) == expect
    if out.fate[u] == 0:
        assert same_fireproof_component(out, t, u, u)
    else:
        assert not same_fireproof_component(out, t, u, u)


def test_run_is_deterministic():
    a = _run(300, 0.05, 11)[2]
    b = _run(300, 0.05, 11)[2]
    assert a.same_as(b)


def test_block_cap_hides_large_blocks(rng):
    t = generate_recursive_tree(50, rng)
    out = run_fire_dynamics(t, EdgeRandomness(rng.random(49), np.ones(49, dtype=bool)), block_cap=10)
    assert out.block(1) is None and out.fire_size[0] == 50 and out.fate[7] == 1


def test_summary_row_layout():
    _, _, out = _run(200, 0.05, 3)
    row = out.summary_row(K=4)
    assert list(row)[:6] == ["n", "I_n", "b0", "root_fire_index", "num_fires", "f1_down"]
    assert len(row) == 6 + 8
    for i in range(out.num_fires, 4):
        assert row[f"theta_{i + 1}"] is None and row[f"b_{i + 1}"] is None


def test_first_fire_time_is_truncated_geometric(rng):
    n, p, trials = 100, 0.1, 100_000
    parents = random_recursive_parents(n, trials, rng)
    prio = rng.random((trials, n - 1))
    marks = rng.random((trials, n - 1)) < p
    theta = np.empty(trials, dtype=np.int64)
    for i in range(trials):
        ptr, kids = K.children_csr(parents[i])
        res = K.fire_sweep(parents[i], ptr, kids, prio[i], marks[i])
        theta[i] = res[3][0] if res[3].size else n - 1  # no fire at all: n - 1 fireproof decisions
    k = np.arange(n)
    pmf = np.where(k < n - 1, p * (1 - p) ** k, 0.0)
    pmf[n - 1] = 1 - pmf.sum()  # "no fire" lumped into the truncation cell
    rep = chi_square_test(np.bincount(theta, minlength=n), pmf)
    assert rep.passed, rep.line()


def test_moment_identity_small(rng):
    # E[(I/n)^k] = E[(1-p)^X_{n,k}] on the same trees
    n, p, trials = 200, 0.02, 4000
    for k in (1, 2):
        lhs, rhs = [], []
        for _ in range(trials):
            t = generate_recursive_tree(n, rng)
            r = draw_edge_randomness(t, p, rng)
            lhs.append((run_fire_dynamics(t, r).I / n) ** k)
            _, X = reduced_tree(build_cut_tree(t, r), k, rng)
            rhs.append((1 - p) ** X)
        rep = agreement_test(f"moment k={k}", lhs, rhs)
        assert rep.passed, rep.line()
