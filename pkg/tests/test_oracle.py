from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from firetree.dynamics import draw_edge_randomness, run_fire_dynamics
from firetree.experiments import oracle_tests, simulate_small
from firetree.laws import chi_square_test
from firetree.oracle import all_recursive_trees, brute_force_avg_over_trees, brute_force_I_distribution
from firetree.tree import Tree, generate_recursive_tree


def test_single_edge():
    p = Fraction(3, 10)
    law = brute_force_I_distribution(Tree.path(2), p)
    assert law.I_pmf == {0: p, 2: 1 - p}
    assert law.root_burn_probability == p
    assert law.b0_pmf == {0: 1 - p, 2: p}


def test_path_without_fire():
    assert brute_force_I_distribution(Tree.path(3), 0).I_pmf == {3: 1}


def test_path_of_three_by_hand():
    p = Fraction(2, 7)
    law = brute_force_I_distribution(Tree.path(3), p)
    assert law.I_pmf == {0: p, 1: (1 - p) * p, 3: (1 - p) ** 2}


def test_everything_burns_when_p_is_one():
    law = brute_force_I_distribution(Tree.star(6), 1)
    assert law.joint == {(0, 6, 1): 1}


def test_size_limits():
    with pytest.raises(ValueError):
        brute_force_I_distribution(Tree.path(9), 0.5)
    with pytest.raises(ValueError):
        brute_force_avg_over_trees(7, 0.5)


def test_tree_average_small_cases():
    p = Fraction(1, 3)
    assert brute_force_avg_over_trees(2, p).joint == brute_force_I_distribution(Tree.path(2), p).joint
    path, cherry = (brute_force_I_distribution(t, p).I_pmf for t in (Tree.path(3), Tree.star(3)))
    avg = brute_force_avg_over_trees(3, p).I_pmf
    for k in set(path) | set(cherry):
        assert avg.get(k, 0) == (path.get(k, 0) + cherry.get(k, 0)) / 2
    assert len(list(all_recursive_trees(5))) == 24


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_total_mass(n):
    law = brute_force_avg_over_trees(n, Fraction(2, 5))
    assert sum(law.joint.values()) == 1
    assert sum(law.I_pmf.values()) == 1


@given(st.integers(2, 7), st.integers(0, 2 ** 32), st.data())
@settings(max_examples=30, deadline=None)
def test_root_preserving_relabelling(n, seed, data):
    rng = np.random.default_rng(seed)
    t = generate_recursive_tree(n, rng)
    perm = data.draw(st.permutations(list(range(2, n + 1))))
    relabel = {1: 1, **{v: perm[v - 2] for v in range(2, n + 1)}}
    u = Tree.from_edges(n, [(relabel[a], relabel[b]) for a, b in t.edges()])
    p = Fraction(1, 4)
    assert brute_force_I_distribution(t, p).joint == brute_force_I_distribution(u, p).joint


def test_fixed_tree_monte_carlo(rng):
    t = Tree([0, 0, 1, 1, 2, 2, 3, 5])
    p = 0.35
    law = brute_force_I_distribution(t, p)
    trials = 50_000
    I = np.array([run_fire_dynamics(t, draw_edge_randomness(t, p, rng)).I for _ in range(trials)])
    keys = sorted(law.I_pmf)
    counts = np.array([np.sum(I == k) for k in keys])
    assert counts.sum() == trials
    rep = chi_square_test(counts, np.array([float(law.I_pmf[k]) for k in keys]))
    assert rep.passed, rep.line()


def test_tree_average_monte_carlo():
    sims = simulate_small(5, 0.4, 200_000, seed=5)
    tests, rows = oracle_tests(5, 0.4, sims)
    assert all(t.passed for t in tests), [t.line() for t in tests]
    assert rows


def test_one_point_law_handled():
    sims = simulate_small(4, 1.0, 1000, seed=1)
    tests, _ = oracle_tests(4, 1.0, sims)
    assert all(t.passed for t in tests)
