#!/usr/bin/env python3
"""Build a self-contained demo tree: registry + datasets + results.

Writes <out>/registry and <out>/results, evaluating every demo model on the
demo benchmark. The tree is deterministic, so rebuilding into a fresh
directory reproduces the same bytes (modulo started_at stamps).
"""

from __future__ import annotations

import argparse
from pathlib import Path

from embench.cli import RunConfig, run_benchmark
from embench.mocks import DEMO_BENCHMARK, DEMO_MODELS, build_demo_registry
from embench.registry import load_registry


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path("demo-tree"),
                        help="output directory (default: ./demo-tree)")
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    registry_root = args.out / "registry"
    results_root = args.out / "results"
    build_demo_registry(registry_root)
    registry = load_registry(registry_root)
    print(f"registry written to {registry_root}")

    for model_name in DEMO_MODELS:
        cfg = RunConfig(registry_root=registry_root, results_root=results_root,
                        model_name=model_name, benchmark=DEMO_BENCHMARK,
                        seed=args.seed)
        outcomes, failures = run_benchmark(cfg)
        for record, path in outcomes:
            task = registry.tasks[record.task_name]
            score = record.scores.splits[task.eval_splits[0]][task.main_score]
            print(f"ok   {model_name:18s} {record.task_name:22s} "
                  f"{task.main_score}={score:.4f} -> {path}")
        for failure in failures:
            print(f"FAIL {model_name:18s} {failure.task_name:22s} "
                  f"{failure.code}: {failure.message}")
        if failures:
            return 1
    print(f"\nresults written to {results_root}")
    print(f"next: python3 scripts/rank_demo.py --tree {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
