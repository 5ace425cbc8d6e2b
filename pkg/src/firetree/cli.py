"""Command line entry point: ``firetree <experiment> [options]``.

Exit status is 0 when every statistical test passes, 2 when at least one
fails, and 1 on usage or runtime errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .dynamics import draw_edge_randomness, run_fire_dynamics
from .experiments import (
    EXPERIMENTS, REGIMES, ConfigError, ExperimentConfig, ExperimentReport, fire_columns, run_experiment,
)
from .runner import trial_seed
from .tree import generate_recursive_tree

log = logging.getLogger("firetree")

EXIT_OK, EXIT_ERROR, EXIT_FAILED = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="firetree", description="Fire dynamics on random recursive trees.")
    parser.add_argument("experiment", choices=sorted(EXPERIMENTS) + ["simulate"])
    parser.add_argument("--n", type=int, help="tree size")
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--c", type=float, help="critical scale: p = c ln n / n")
    group.add_argument("--p", type=float, help="explicit fire probability")
    group.add_argument("--subcrit-a", type=float, dest="subcrit_a", help="p = n^-a")
    parser.add_argument("--regime", choices=REGIMES, help="pick the regime's default p")
    parser.add_argument("--trials", type=int)
    parser.add_argument("--seed", type=_u64, default=0)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--K", type=int, default=8, help="fires recorded per trial")
    parser.add_argument("--j-max", type=int, default=3, dest="j_max",
                        help="largest j for the 'root burns with fire j' conditioning")
    parser.add_argument("--dump-tree", metavar="PATH", help="simulate only: write the tree to PATH")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def _simulate(cfg: ExperimentConfig, dump_tree: str | None) -> int:
    """One run of the dynamics; the row goes to ``<out>/simulate.csv``."""
    cfg = ExperimentConfig("phase_transition", n=cfg.n, c=cfg.c, p=cfg.p, subcrit_a=cfg.subcrit_a,
                           regime=cfg.regime, trials=1, seed=cfg.seed, K=cfg.K, out=cfg.out).resolve()
    seed = trial_seed(cfg.seed, 0)
    rng = np.random.Generator(np.random.PCG64(seed))
    tree = generate_recursive_tree(cfg.n, rng)
    out = run_fire_dynamics(tree, draw_edge_randomness(tree, cfg.p, rng))
    row = {"trial": 0, "p": cfg.p, "seed": seed, **out.summary_row(cfg.K)}
    report = ExperimentReport(cfg, fire_columns(cfg.K), [row], {"p": cfg.p, "regime": cfg.regime}, [])
    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "simulate.csv").write_text(report.csv_text())
    if dump_tree:
        Path(dump_tree).write_text(tree.to_text())
    print(json.dumps({k: v for k, v in row.items() if v is not None}))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    if args.dump_tree and args.experiment != "simulate":
        parser.error("--dump-tree only applies to 'simulate'")
    cfg = ExperimentConfig(args.experiment, n=args.n, c=args.c, p=args.p, subcrit_a=args.subcrit_a,
                           regime=args.regime, trials=args.trials, seed=args.seed, workers=args.workers,
                           out=args.out, K=args.K, j_max=args.j_max)
    try:
        if args.experiment == "simulate":
            if args.n is None:
                parser.error("simulate needs --n")
            return _simulate(cfg, args.dump_tree)
        cfg = cfg.resolve()
        log.info("%s: n=%d trials=%d p=%s regime=%s", cfg.experiment, cfg.n, cfg.trials, cfg.p, cfg.regime)
        report = run_experiment(cfg)
        csv_path, json_path = report.write(cfg.out)
    except ConfigError as exc:
        print(f"firetree: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, ValueError, RuntimeError) as exc:
        log.error("%s failed: %s", args.experiment, exc)
        return EXIT_ERROR
    log.info("resolved p=%s; dropped %d degenerate trials", cfg.p, report.dropped)
    for t in report.tests:
        print(t.line())
    log.info("wrote %s and %s", csv_path, json_path)
    return EXIT_OK if report.passed else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
