#!/usr/bin/env python3

"""
Experiment Reproduction Script
Regenerates the figure data and the car-network sweep reports

Writes:
- data/figures/figure4.tsv   chain: distance vs. belief in X_i (both calculi)
- data/figures/figure5.tsv   fork: observed effects vs. Pr[y+], Pr[x_n+]
- data/figures/figure6.tsv   fork: observed effects vs. kappa margins of Y, X_n
- data/reports/car_ordering.tsv   fault orderings per run and epsilon
- data/reports/car_beliefs.tsv    C2 vs. C1 belief cells per fault
"""

import os
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from config import DEFAULT_EPSILONS, FIGURES_DIR, NETWORKS_DIR, REPORTS_DIR  # noqa: E402
from generators.analytic import ChainSpec, ForkSpec, emit_figure_data  # noqa: E402
from outputs.reports import sweep_belief_table, sweep_ordering_table, to_tsv  # noqa: E402
from processors.diagnosis import FaultSet, epsilon_sweep  # noqa: E402
from utils.network_io import load_network  # noqa: E402
from utils.system_config import SYSTEM_CONFIG  # noqa: E402


def _write(path: str, text: str) -> None:
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    print(f"✅ {os.path.relpath(path)}")


def write_figures() -> None:
    chain = ChainSpec(length=SYSTEM_CONFIG.get("analytic_settings.chain_length", 10))
    fork = ForkSpec(effects=SYSTEM_CONFIG.get("analytic_settings.fork_effects", 10))

    _write(os.path.join(FIGURES_DIR, "figure4.tsv"), to_tsv(emit_figure_data(4, chain)))
    _write(os.path.join(FIGURES_DIR, "figure5.tsv"), to_tsv(emit_figure_data(5, fork)))
    _write(os.path.join(FIGURES_DIR, "figure6.tsv"), to_tsv(emit_figure_data(6, fork)))


def write_car_reports() -> None:
    experiment = SYSTEM_CONFIG.get("car_experiment", {})
    net = load_network(os.path.join(NETWORKS_DIR, experiment.get("network", "car.json")))
    faults = FaultSet(tuple(experiment.get("faults", {}).items()))
    fixed = experiment.get("fixed_evidence", {})
    runs = [{**fixed, **run} for run in experiment.get("runs", [])]

    report = epsilon_sweep(
        net,
        runs,
        faults,
        SYSTEM_CONFIG.get("sweep_settings.epsilons", list(DEFAULT_EPSILONS)),
        max_workers=SYSTEM_CONFIG.get("sweep_settings.max_workers"),
        timeout_per_run=SYSTEM_CONFIG.get("sweep_settings.timeout_per_run"),
    )
    _write(os.path.join(REPORTS_DIR, "car_ordering.tsv"), sweep_ordering_table(report))
    _write(os.path.join(REPORTS_DIR, "car_beliefs.tsv"), sweep_belief_table(report))

    if report.failed_runs:
        print(f"⚠️  Runs with impossible evidence: {report.failed_runs}")


def main():
    print("🎯 Reproducing experiment data")
    print("=" * 60)

    print("📊 Step 1: Figure data...")
    write_figures()
    print()

    print("🔄 Step 2: Car network sweep...")
    write_car_reports()
    print()

    print("✅ Done")


if __name__ == "__main__":
    main()
