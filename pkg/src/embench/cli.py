"""Command-line entry point: run evaluations, validate trees, emit tables
and exports, hash datasets, serve the API.

Exit codes are a stable contract for CI callers: 0 success or clean
validation, 1 validation defects or task failures, 2 usage errors.

By default a result's evaluation_time_s is a deterministic workload estimate
(texts encoded x 1 ms) so repeated runs produce byte-identical records;
--wall-clock opts into real measured timing at the cost of that guarantee.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .canonical import canonical_dumps
from .datasets import load_dataset, verify_manifest, canonical_hash, workload_texts
from .embedder import build_embedder
from .errors import EmbenchError, InvalidMetadata
from .evaluators import EvalSeed, evaluate_task
from .leaderboard import (
    BenchmarkFilter,
    aggregate_table,
    coverage_report,
    export_scatter,
    render_markdown_table,
)
from .registry import FileDefect, Registry, collect_registry, load_registry, resolve_benchmark
from .results import (
    ResultRecord,
    estimate_emissions,
    now_timestamp,
    parse_result_obj,
    scan_results_repo,
    validate_result,
    write_result,
)
from .server import serve

DEFAULT_POWER_W = 150.0
DEFAULT_INTENSITY = 0.475
SECONDS_PER_TEXT = 0.001


@dataclass(frozen=True)
class RunConfig:
    registry_root: Path
    results_root: Path
    model_name: str
    benchmark: str | None = None
    tasks: tuple[str, ...] | None = None
    seed: int = 42
    power_w: float = DEFAULT_POWER_W
    intensity: float = DEFAULT_INTENSITY
    jobs: int = 1
    wall_clock: bool = False


@dataclass(frozen=True)
class TaskFailure:
    task_name: str
    code: str
    message: str


def run_benchmark(cfg: RunConfig) -> tuple[list[tuple[ResultRecord, Path]], list[TaskFailure]]:
    """Evaluate one model on a benchmark or task list, writing result files.

    One task failing is reported and does not abort the others; callers turn
    a non-empty failure list into exit code 1.
    """
    if (cfg.benchmark is None) == (cfg.tasks is None):
        raise EmbenchError("usage", "exactly one of benchmark or tasks must be given")
    registry = load_registry(cfg.registry_root)
    meta = registry.models.get(cfg.model_name)
    if meta is None:
        raise EmbenchError("unknown_model", f"no model named {cfg.model_name!r}")
    if cfg.benchmark is not None:
        task_metas = resolve_benchmark(registry, cfg.benchmark)
    else:
        task_metas = []
        for name in cfg.tasks:
            task = registry.tasks.get(name)
            if task is None:
                raise EmbenchError("unknown_task", f"no task named {name!r}")
            task_metas.append(task)
    embedder = build_embedder(meta)
    seed = EvalSeed(cfg.seed)

    def evaluate_one(task) -> tuple[ResultRecord, Path]:
        started_at = now_timestamp()
        t0 = time.monotonic()
        data = load_dataset(task, base_dir=registry.root)
        scores = evaluate_task(embedder, task, data, seed)
        if cfg.wall_clock:
            duration = time.monotonic() - t0
        else:
            duration = workload_texts(data, task.eval_splits) * SECONDS_PER_TEXT
        record = ResultRecord(
            task_name=task.name,
            task_revision=task.dataset_revision,
            model_name=meta.name,
            model_revision=meta.revision or "unknown",
            framework_version=registry.framework_version,
            scores=scores,
            evaluation_time_s=duration,
            started_at=started_at,
            kg_co2_emissions=estimate_emissions(duration, cfg.power_w, cfg.intensity),
        )
        return record, write_result(cfg.results_root, record)

    outcomes: list[tuple[ResultRecord, Path]] = []
    failures: list[TaskFailure] = []
    with ThreadPoolExecutor(max_workers=max(1, cfg.jobs)) as pool:
        futures = [(task.name, pool.submit(evaluate_one, task)) for task in task_metas]
        for task_name, future in futures:
            try:
                outcomes.append(future.result())
            except EmbenchError as exc:
                failures.append(TaskFailure(task_name=task_name, code=exc.code, message=str(exc.args[0])))
    return outcomes, failures


def validate_tree(registry_root: Path, results_root: Path | None = None) -> list[FileDefect]:
    """Full static check: metadata validators, benchmark references, dataset
    pins, result records, and result cross-references.

    Cross-reference checks use names declared in raw JSON, so one defective
    file yields exactly its own defects and never cascades into spurious
    dangling references. Framework-version compatibility is a scan-time
    concern and deliberately not flagged here.
    """
    scan = collect_registry(registry_root)
    defects = list(scan.defects)

    for name in sorted(scan.benchmarks):
        bench = scan.benchmarks[name]
        source = scan.sources.get(("benchmarks", name), f"benchmarks/{name}.json")
        for task_name in bench.task_names:
            if task_name not in scan.declared_tasks:
                defects.append(
                    FileDefect(
                        file=source,
                        path="task_names",
                        code="unknown_task",
                        message=f"benchmark {name!r} references unknown task {task_name!r}",
                    )
                )

    registry_root = Path(registry_root)
    for name in sorted(scan.tasks):
        task = scan.tasks[name]
        source = scan.sources.get(("tasks", name), f"tasks/{name}.json")
        directory = Path(task.dataset_path)
        if not directory.is_absolute():
            directory = registry_root / directory
        if not directory.is_dir():
            defects.append(
                FileDefect(file=source, path="dataset_path", code="io_error",
                           message=f"dataset directory {directory} does not exist")
            )
            continue
        for problem in verify_manifest(directory, task.dataset_revision):
            defects.append(
                FileDefect(file=source, path="dataset_revision", code=problem.code, message=problem.message)
            )

    if results_root is not None:
        results_root = Path(results_root)
        if not results_root.is_dir():
            raise EmbenchError("io_error", f"results root {results_root} is not a directory")
        for path in sorted(results_root.glob("*/*/*.json")):
            if path.name.startswith("."):
                continue
            rel = path.relative_to(results_root).as_posix()
            try:
                obj = json.loads(path.read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                defects.append(FileDefect(file=rel, path="", code="format_error", message=str(exc)))
                continue
            if not isinstance(obj, dict):
                defects.append(FileDefect(file=rel, path="", code="bad_type",
                                          message="top-level value must be an object"))
                continue
            record, record_defects = parse_result_obj(obj)
            if record is not None:
                record_defects = record_defects + validate_result(record)
            defects.extend(
                FileDefect(file=rel, path=d.path, code=d.code, message=d.message) for d in record_defects
            )
            if record is None:
                continue
            if record.model_name not in scan.declared_models:
                defects.append(
                    FileDefect(file=rel, path="model_name", code="dangling_model_reference",
                               message=f"result references unknown model {record.model_name!r}")
                )
            if record.task_name not in scan.declared_tasks:
                defects.append(
                    FileDefect(file=rel, path="task_name", code="dangling_task_reference",
                               message=f"result references unknown task {record.task_name!r}")
                )
            elif record.task_name in scan.tasks:
                pinned = scan.tasks[record.task_name].dataset_revision
                if record.task_revision != pinned:
                    defects.append(
                        FileDefect(file=rel, path="task_revision", code="stale_task_revision",
                                   message=f"result pinned {record.task_revision} but registry pins {pinned}")
                    )
    return defects


# ---------------------------------------------------------------------------
# Argument plumbing


def _add_registry_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--registry", default=os.environ.get("EMBENCH_REGISTRY"),
                        help="registry root (default: $EMBENCH_REGISTRY)")


def _add_results_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--results", default=os.environ.get("EMBENCH_RESULTS"),
                        help="results repository root (default: $EMBENCH_RESULTS)")


def _require(parser: argparse.ArgumentParser, value, flag: str):
    if value is None:
        parser.error(f"{flag} is required (flag or environment variable)")
    return value


def _filter_from_args(args) -> BenchmarkFilter:
    def as_set(raw):
        if raw is None:
            return None
        values = [v for v in raw.split(",") if v]
        return frozenset(values) if values else None

    return BenchmarkFilter(
        task_types=as_set(args.task_types),
        languages=as_set(args.languages),
        domains=as_set(args.domains),
        min_zero_shot=args.min_zero_shot,
        include_unknown_zero_shot=args.include_unknown == "true",
    )


def _add_filter_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--benchmark", required=True)
    parser.add_argument("--task-types", dest="task_types", default=None, help="comma-separated task types")
    parser.add_argument("--languages", default=None, help="comma-separated language codes")
    parser.add_argument("--domains", default=None, help="comma-separated domains")
    parser.add_argument("--min-zero-shot", dest="min_zero_shot", type=float, default=None)
    parser.add_argument("--include-unknown", dest="include_unknown", choices=("true", "false"), default="true",
                        help="keep models with unknown zero-shot score")


def _load_table(args, parser) -> tuple[Registry, object]:
    registry = load_registry(Path(_require(parser, args.registry, "--registry")))
    scan = scan_results_repo(Path(_require(parser, args.results, "--results")), registry)
    return registry, scan


def cmd_run(args, parser) -> int:
    cfg = RunConfig(
        registry_root=Path(_require(parser, args.registry, "--registry")),
        results_root=Path(_require(parser, args.results, "--results")),
        model_name=args.model,
        benchmark=args.benchmark,
        tasks=tuple(args.tasks.split(",")) if args.tasks else None,
        seed=args.seed,
        power_w=args.power_w,
        intensity=args.intensity,
        jobs=args.jobs,
        wall_clock=args.wall_clock,
    )
    outcomes, failures = run_benchmark(cfg)
    for record, path in outcomes:
        print(f"ok {record.task_name} main_score={record.scores.main_score:.4f} -> {path}")
    for failure in failures:
        print(f"fail {failure.task_name} {failure.code}: {failure.message}")
    return 1 if failures else 0


def cmd_validate(args, parser) -> int:
    registry_root = Path(_require(parser, args.registry, "--registry"))
    results_root = Path(args.results) if args.results else None
    defects = validate_tree(registry_root, results_root)
    for d in defects:
        print(f"{d.file}: {d.path or '-'}: {d.code}: {d.message}")
    print(f"{len(defects)} defect(s)")
    return 1 if defects else 0


def cmd_table(args, parser) -> int:
    registry, scan = _load_table(args, parser)
    table = aggregate_table(registry, scan, args.benchmark, _filter_from_args(args))
    print(render_markdown_table(table), end="")
    return 0


def cmd_scatter(args, parser) -> int:
    registry, scan = _load_table(args, parser)
    table = aggregate_table(registry, scan, args.benchmark, _filter_from_args(args))
    print(export_scatter(table), end="")
    return 0


def cmd_coverage(args, parser) -> int:
    registry = load_registry(Path(_require(parser, args.registry, "--registry")))
    print(canonical_dumps(coverage_report(registry)))
    return 0


def cmd_hash(args, parser) -> int:
    print(canonical_hash(Path(args.directory)).revision)
    return 0


def cmd_serve(args, parser) -> int:
    serve(
        Path(_require(parser, args.registry, "--registry")),
        Path(_require(parser, args.results, "--results")),
        host=args.host,
        port=args.port,
        refresh_s=args.refresh_s,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="embench", description="embedding benchmark harness")
    parser.add_argument("--version", action="version", version=__version__)
    subparsers = parser.add_subparsers(dest="command", required=True)

    p_run = subparsers.add_parser("run", help="evaluate a model and write result records")
    _add_registry_flag(p_run)
    _add_results_flag(p_run)
    p_run.add_argument("--model", required=True)
    which = p_run.add_mutually_exclusive_group(required=True)
    which.add_argument("--benchmark")
    which.add_argument("--tasks", help="comma-separated task names")
    p_run.add_argument("--seed", type=int, default=42)
    p_run.add_argument("--power-w", dest="power_w", type=float, default=DEFAULT_POWER_W)
    p_run.add_argument("--intensity", type=float, default=DEFAULT_INTENSITY,
                       help="grid intensity in kgCO2e per kWh")
    p_run.add_argument("--jobs", type=int, default=1)
    p_run.add_argument("--wall-clock", dest="wall_clock", action="store_true",
                       help="record measured wall time instead of the deterministic estimate")
    p_run.set_defaults(func=cmd_run)

    p_validate = subparsers.add_parser("validate", help="check a registry and results tree")
    _add_registry_flag(p_validate)
    _add_results_flag(p_validate)
    p_validate.set_defaults(func=cmd_validate)

    p_table = subparsers.add_parser("table", help="print a benchmark leaderboard as markdown")
    _add_registry_flag(p_table)
    _add_results_flag(p_table)
    _add_filter_flags(p_table)
    p_table.set_defaults(func=cmd_table)

    p_scatter = subparsers.add_parser("scatter", help="print model/score/zero-shot/size CSV")
    _add_registry_flag(p_scatter)
    _add_results_flag(p_scatter)
    _add_filter_flags(p_scatter)
    p_scatter.set_defaults(func=cmd_scatter)

    p_coverage = subparsers.add_parser("coverage", help="print registry coverage statistics")
    _add_registry_flag(p_coverage)
    p_coverage.set_defaults(func=cmd_coverage)

    p_hash = subparsers.add_parser("hash", help="print a dataset directory's revision hash")
    p_hash.add_argument("directory")
    p_hash.set_defaults(func=cmd_hash)

    p_serve = subparsers.add_parser("serve", help="serve the leaderboard HTTP API")
    _add_registry_flag(p_serve)
    _add_results_flag(p_serve)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8076)
    p_serve.add_argument("--refresh-s", dest="refresh_s", type=float, default=60.0)
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except InvalidMetadata as exc:
        for defect in exc.defects:
            print(f"{defect.path}: {defect.code}: {defect.message}", file=sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except EmbenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    raise SystemExit(main())
