"""Exit criteria of the build, each at its stated size and tolerance.

Run with ``pytest tests/test_acceptance.py -v``; a PASS/FAIL summary per
criterion is printed at the end of the session.
"""
from __future__ import annotations

import math

import numpy as np
import pytest

from firetree import _kernels as K
from firetree.cli import main
from firetree.cuttree import build_cut_tree, reduced_tree, root_cut_count, root_cut_count_moments
from firetree.dynamics import draw_edge_randomness, run_fire_dynamics
from firetree.experiments import ExperimentConfig, run_experiment
from firetree.laws import (
    TestReport, agreement_test, chi_square_test, q_j, q_j_monte_carlo, tolerance_test,
)
from firetree.tree import generate_recursive_tree, random_recursive_parents
from firetree.walks import size_biased_pick, stick_breaking, subtree_size_pmf

pytestmark = [pytest.mark.acceptance, pytest.mark.slow]


def _exp(name: str, **kw):
    return run_experiment(ExperimentConfig(name, seed=kw.pop("seed", 2024), **kw))


def test_criterion_01_exact_coupling(record_criterion):
    rep = _exp("coupling_check", n=500, trials=1000)
    assert record_criterion(1, rep.tests)


def test_criterion_02_oracle(record_criterion):
    rep = _exp("oracle_check", n=6, trials=1_000_000)
    assert len(rep.tests) == 5 * 3 * 3
    assert record_criterion(2, rep.tests)


def test_criterion_03_exact_finite_laws(record_criterion):
    rng = np.random.default_rng(3)
    reports = []

    n, p, trials = 100, 0.1, 100_000
    parents = random_recursive_parents(n, trials, rng)
    prio = rng.random((trials, n - 1))
    marks = rng.random((trials, n - 1)) < p
    theta = np.empty(trials, dtype=np.int64)
    for i in range(trials):
        ptr, kids = K.children_csr(parents[i])
        res = K.fire_sweep(parents[i], ptr, kids, prio[i], marks[i])
        theta[i] = res[3][0] if res[3].size else n - 1
    k = np.arange(n)
    pmf = np.where(k < n - 1, p * (1 - p) ** k, 0.0)
    pmf[n - 1] = 1 - pmf.sum()
    reports.append(chi_square_test(np.bincount(theta, minlength=n), pmf, name="theta_1 truncated geometric"))

    picks = [size_biased_pick(stick_breaking(10, rng), rng) for _ in range(200_000)]
    reports.append(chi_square_test(np.bincount(picks, minlength=11)[1:], np.full(10, 0.1),
                                   name="size-biased pick uniform on [10]"))

    n, v = 50, 10
    parents = random_recursive_parents(n, 100_000, rng)
    sizes = np.array([K.descendants_of(parents[i], v) for i in range(parents.shape[0])])
    reports.append(chi_square_test(np.bincount(sizes - 1, minlength=n - v + 1), subtree_size_pmf(n, v),
                                   name="subtree size n=50 v=10"))

    n, trees, pairs = 10_000, 20_000, 5
    hits = 0
    for _ in range(trees // 1000):
        parents = random_recursive_parents(n, 1000, rng)
        uv = rng.integers(1, n + 1, size=(1000, pairs, 2))
        for t in range(1000):
            hits += sum(K.same_top_branch(parents[t], int(a), int(b)) for a, b in uv[t])
    reports.append(tolerance_test("P(h(u^v) >= 1) vs (n-1)/(2n)", hits / (trees * pairs),
                                  (n - 1) / (2 * n), 0.01, trees * pairs))
    assert record_criterion(3, reports)


def test_criterion_04_moment_identity(record_criterion):
    rng = np.random.default_rng(4)
    n, p, trials = 1000, 0.01, 10_000
    lhs = {1: [], 2: []}
    rhs = {1: [], 2: []}
    for _ in range(trials):
        t = generate_recursive_tree(n, rng)
        r = draw_edge_randomness(t, p, rng)
        frac = run_fire_dynamics(t, r).I / n
        cut = build_cut_tree(t, r)
        for k in (1, 2):
            lhs[k].append(frac ** k)
            rhs[k].append((1 - p) ** reduced_tree(cut, k, rng)[1])
    reports = [agreement_test(f"E[(I/n)^{k}] vs E[(1-p)^X_k]", lhs[k], rhs[k]) for k in (1, 2)]
    assert record_criterion(4, reports)


def test_criterion_05_phase_transition(record_criterion):
    reports = []
    for regime in ("supercritical", "subcritical", "critical"):
        reports += _exp("phase_transition", n=100_000, trials=500, regime=regime).tests
    assert record_criterion(5, reports)


def test_criterion_06_subcritical_scaling(record_criterion):
    rep = _exp("subcritical_scaling", n=1_000_000, trials=1000, subcrit_a=0.5)
    assert record_criterion(6, rep.tests)


def test_criterion_07_connectivity(record_criterion):
    rep = _exp("connectivity", n=100_000, trials=2000, c=1.0)
    assert record_criterion(7, rep.tests)


def test_criterion_08_burnt_sequence(record_criterion):
    rep = _exp("burnt_sequence", n=100_000, trials=5000, c=1.0)
    rng = np.random.default_rng(8)
    reports = list(rep.tests)
    for j in range(1, 6):
        for c in (0.5, 1.0, 2.0):
            m, se = q_j_monte_carlo(c, j, rng, 1_000_000)
            reports.append(TestReport(f"q_{j}({c:g}) series vs MC [sigmas]", abs(m - q_j(c, j)) / se, 3.0,
                                      None, 1_000_000))
    reports.append(tolerance_test("q_30(1) vs exp(-1)", q_j(1.0, 30), math.exp(-1), 1e-3, 1))
    assert record_criterion(8, reports)


def test_criterion_09_walk_laws(record_criterion):
    rep = _exp("walk_laws", n=1_000_000, trials=1000)
    reports = list(rep.tests)
    rng = np.random.default_rng(9)
    n, trials = 100_000, 2000
    scaled = np.empty(trials)
    for i in range(trials):
        t = generate_recursive_tree(n, rng)
        scaled[i] = root_cut_count(t, draw_edge_randomness(t, 0.0, rng)) * math.log(n) / n
    e1, e2 = root_cut_count_moments(n)
    scale = math.log(n) / n
    print(f"exact finite-n: E[zeta ln n/n] = {e1[n] * scale:.4f}, E[(zeta ln n/n)^2] = {e2[n] * scale ** 2:.4f}")
    reports.append(tolerance_test("mean(zeta ln n/n) vs 1", scaled.mean(), 1.0, 0.1, trials))
    reports.append(tolerance_test("mean((zeta ln n/n)^2) vs 1", np.mean(scaled ** 2), 1.0, 0.2, trials))
    assert record_criterion(9, reports)


def test_criterion_10_determinism(record_criterion, tmp_path):
    reports = []
    for experiment, args in (("burnt_sequence", ["--n", "20000", "--trials", "200"]),
                             ("oracle_check", ["--n", "4", "--trials", "100000"])):
        texts = []
        for run, workers in enumerate((1, 8, 1, 8)):
            out = tmp_path / f"{experiment}{run}"
            main([experiment, *args, "--seed", "77", "--workers", str(workers), "--out", str(out)])
            texts.append((out / f"{experiment}.csv").read_bytes())
        distinct = len(set(texts))
        reports.append(TestReport(f"{experiment}: distinct CSVs over workers 1,8 x2", distinct, 1, None, 4))
    assert record_criterion(10, reports)
