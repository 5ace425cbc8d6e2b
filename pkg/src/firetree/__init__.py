"""Fire dynamics on uniform random recursive trees, cut-trees and related limit laws."""
from __future__ import annotations

from .cuttree import (
    CutTree, MarkedCutTree, apply_mark_process, build_cut_tree, fire_outcome_from_marks, reduced_tree,
    root_cut_count, root_cut_count_moments, root_path_blocks, zeta,
)
from .dynamics import (
    EdgeRandomness, EdgeState, FireEvent, FireOutcome, draw_edge_randomness, largest_fireproof_component,
    run_fire_dynamics, same_fireproof_component,
)
from .experiments import EXPERIMENTS, ExperimentConfig, ExperimentReport, run_experiment
from .laws import (
    Beta, ConditionedExp, Exponential, Gamma, ReferenceLaw, TestReport, TruncatedExpWithAtom, chi_square_test,
    ks_statistic, moment_eps_min_one, q_j, sample_reference,
)
from .oracle import OracleLaw, brute_force_avg_over_trees, brute_force_I_distribution
from .runner import trial_rng, trial_seed
from .tree import (
    SpinalDecomposition, Tree, generate_recursive_tree, lca_height, spinal_decomposition, subtree_size,
    vertex_height,
)
from .walks import (
    StickBreaking, WalkPath, beta_binomial_pmf, max_step_measure, run_walk_to, sample_xi, size_biased_pick,
    spine_cut_count_estimate, stick_breaking, subtree_size_pmf,
)

__version__ = "0.1.0"
