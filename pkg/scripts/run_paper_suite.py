#!/usr/bin/env python3
"""Run the benchmark suite across obfuscation modes and print a table.

Example:
    python scripts/run_paper_suite.py --modes global,chained --runs 100
"""
import argparse

from qobf.bench import run_paper_suite
from qobf.obfuscate import ObfuscationMode


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--modes", default="global", help="comma-separated modes")
    ap.add_argument("--shots", type=int, default=1024)
    ap.add_argument("--runs", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    modes = tuple(ObfuscationMode(m) for m in args.modes.split(","))
    rows = run_paper_suite(modes=modes, shots=args.shots, runs=args.runs, seed=args.seed)

    header = (
        f"{'Circuit':<18}{'Mode':<9}{'Orig (ms)':>11}{'Obf (ms)':>11}"
        f"{'Acc (%)':>9}{'TVD':>9}{'Gates':>7}{'dDepth':>8}"
    )
    print(header)
    print("-" * len(header))
    for r in rows:
        print(
            f"{r.name:<18}{r.mode:<9}"
            f"{1e3 * r.report.original_runtime_seconds:>11.3f}"
            f"{1e3 * r.report.obfuscated_runtime_seconds:>11.3f}"
            f"{r.report.semantic_accuracy_percent:>9.2f}"
            f"{r.report.tvd:>9.4f}"
            f"{r.structure.measured_count:>7d}"
            f"{r.structure.depth_delta:>8d}"
        )


if __name__ == "__main__":
    main()
