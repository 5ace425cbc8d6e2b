"""Running a configured experiment and reading its report, as the command line does."""
from __future__ import annotations

import tempfile

from firetree import ExperimentConfig, run_experiment

cfg = ExperimentConfig("burnt_sequence", n=20_000, trials=300, seed=7).resolve()
print("resolved:", cfg.echo())

report = run_experiment(cfg)
for t in report.tests:
    print(t.line())
for t in report.diagnostics:
    print("  diagnostic:", t.line())

with tempfile.TemporaryDirectory() as out:
    csv_path, json_path = report.write(out)
    print(csv_path.read_text().splitlines()[0])
    print("rows:", len(report.rows), "passed:", report.passed)

# same run from a shell:
#   firetree burnt_sequence --n 20000 --trials 300 --seed 7 --out results/
