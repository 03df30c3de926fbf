#!/usr/bin/env python3
"""Rank a results tree: print the leaderboard, scatter CSV, and coverage.

Expects the layout produced by build_demo_tree.py (<tree>/registry plus
<tree>/results). Filters mirror the CLI/API surface.
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

from embench.leaderboard import (
    BenchmarkFilter,
    aggregate_table,
    coverage_report,
    export_scatter,
    render_markdown_table,
)
from embench.mocks import DEMO_BENCHMARK
from embench.registry import load_registry
from embench.results import scan_results_repo


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--tree", type=Path, default=Path("demo-tree"))
    parser.add_argument("--benchmark", default=DEMO_BENCHMARK)
    parser.add_argument("--task-types", default=None,
                        help="comma-separated task type filter")
    parser.add_argument("--min-zero-shot", type=float, default=None)
    parser.add_argument("--exclude-unknown", action="store_true")
    args = parser.parse_args()

    registry = load_registry(args.tree / "registry")
    scan = scan_results_repo(args.tree / "results", registry)
    filt = BenchmarkFilter(
        task_types=tuple(args.task_types.split(",")) if args.task_types else None,
        min_zero_shot=args.min_zero_shot,
        include_unknown_zero_shot=not args.exclude_unknown,
    )
    table = aggregate_table(registry, scan, args.benchmark, filt)

    print(render_markdown_table(table))
    print("\n=== scatter ===")
    print(export_scatter(table))
    print("=== coverage ===")
    print(json.dumps(coverage_report(registry), indent=2, sort_keys=True))
    if scan.excluded:
        print("=== excluded result files ===")
        for path, reason in scan.excluded:
            print(f"{path}: {reason}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
