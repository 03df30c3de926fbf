"""Registry loading and semantic-version compatibility.

A registry root holds ``models/<org>/<model>.json``, ``tasks/<name>.json``,
and ``benchmarks/<name>.json``.  Loading is file-order independent (files are
processed sorted by path) and strict: any structural or semantic defect in
any record aborts the load with the full aggregated report.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .errors import EmbenchError, InvalidMetadata
from .metadata import (
    BenchmarkDef,
    Defect,
    ModelMeta,
    TaskMetadata,
    parse_benchmark,
    parse_model_meta,
    parse_task_meta,
    validate_benchmark,
    validate_model_meta,
    validate_task_meta,
)

SEMVER_RE = re.compile(r"^(0|[1-9][0-9]*)\.(0|[1-9][0-9]*)\.(0|[1-9][0-9]*)$")


@dataclass(frozen=True, order=True)
class SemVer:
    major: int
    minor: int
    patch: int

    def __str__(self) -> str:
        return f"{self.major}.{self.minor}.{self.patch}"


def try_parse_semver(text: str) -> SemVer | None:
    """Strict MAJOR.MINOR.PATCH; pre-release and build suffixes rejected."""
    if not isinstance(text, str):
        return None
    match = SEMVER_RE.match(text)
    if not match:
        return None
    return SemVer(int(match.group(1)), int(match.group(2)), int(match.group(3)))


def parse_semver(text: str) -> SemVer:
    version = try_parse_semver(text)
    if version is None:
        raise EmbenchError("bad_semver", f"{text!r} is not MAJOR.MINOR.PATCH")
    return version


def check_compat(result_version: SemVer, framework_version: SemVer) -> str:
    """Results keep their validity across minor and patch bumps only."""
    return "compatible" if result_version.major == framework_version.major else "incompatible"


@dataclass(frozen=True)
class FileDefect:
    """A Defect anchored to the file it was found in."""

    file: str
    path: str
    code: str
    message: str


def _anchor(file: Path, root: Path, defects: list[Defect]) -> list[FileDefect]:
    rel = file.relative_to(root).as_posix()
    return [FileDefect(file=rel, path=d.path, code=d.code, message=d.message) for d in defects]


@dataclass
class Registry:
    """Immutable post-load snapshot of all validated records."""

    models: dict[str, ModelMeta]
    tasks: dict[str, TaskMetadata]
    benchmarks: dict[str, BenchmarkDef]
    framework_version: str
    root: Path


@dataclass
class RegistryScan:
    """Raw scan: validated records plus every defect and every declared name.

    Declared-name sets come from the raw JSON ``name`` field even when the
    record fails validation, so cross-reference checks do not cascade one
    defective file into spurious dangling-reference defects.
    """

    models: dict[str, ModelMeta] = field(default_factory=dict)
    tasks: dict[str, TaskMetadata] = field(default_factory=dict)
    benchmarks: dict[str, BenchmarkDef] = field(default_factory=dict)
    defects: list[FileDefect] = field(default_factory=list)
    declared_models: set[str] = field(default_factory=set)
    declared_tasks: set[str] = field(default_factory=set)
    declared_benchmarks: set[str] = field(default_factory=set)
    # (category, record name) -> registry-relative source file of the kept record
    sources: dict[tuple[str, str], str] = field(default_factory=dict)


def _load_json(file: Path, root: Path, scan: RegistryScan) -> dict | None:
    try:
        text = file.read_text(encoding="utf-8")
    except OSError as exc:
        raise EmbenchError("io_error", f"cannot read {file}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        scan.defects.extend(
            _anchor(file, root, [Defect(path="", code="format_error", message=f"invalid JSON: {exc}")])
        )
        return None
    if not isinstance(obj, dict):
        scan.defects.extend(
            _anchor(file, root, [Defect(path="", code="bad_type", message="top-level value must be an object")])
        )
        return None
    return obj


def collect_registry(root: Path) -> RegistryScan:
    """Scan all metadata files under root, validating and deduplicating."""
    root = Path(root)
    if not root.is_dir():
        raise EmbenchError("io_error", f"registry root {root} is not a directory")
    scan = RegistryScan()

    categories = (
        ("models", "models/*/*.json", parse_model_meta, validate_model_meta, scan.models, scan.declared_models),
        ("tasks", "tasks/*.json", parse_task_meta, validate_task_meta, scan.tasks, scan.declared_tasks),
        ("benchmarks", "benchmarks/*.json", parse_benchmark, validate_benchmark, scan.benchmarks, scan.declared_benchmarks),
    )
    for category, pattern, parse, validate, records, declared in categories:
        for file in sorted(root.glob(pattern)):
            obj = _load_json(file, root, scan)
            if obj is None:
                continue
            raw_name = obj.get("name")
            if isinstance(raw_name, str):
                declared.add(raw_name)
            record, defects = parse(obj)
            if record is not None:
                defects = list(defects) + validate(record)
            if defects:
                scan.defects.extend(_anchor(file, root, defects))
                continue
            if record.name in records:
                scan.defects.extend(
                    _anchor(
                        file,
                        root,
                        [
                            Defect(
                                path="name",
                                code="duplicate_name",
                                message=f"{category[:-1]} name {record.name!r} declared by more than one file",
                            )
                        ],
                    )
                )
                continue
            records[record.name] = record
            scan.sources[(category, record.name)] = file.relative_to(root).as_posix()
    return scan


def load_registry(root: Path) -> Registry:
    """Load and fully validate a registry; any defect aborts with the report."""
    scan = collect_registry(root)
    if scan.defects:
        lines = "; ".join(f"{d.file}:{d.path}:{d.code}" for d in scan.defects[:8])
        raise InvalidMetadata(
            f"{len(scan.defects)} metadata defect(s): {lines}",
            [Defect(path=f"{d.file}:{d.path}", code=d.code, message=d.message) for d in scan.defects],
        )
    return Registry(
        models=scan.models,
        tasks=scan.tasks,
        benchmarks=scan.benchmarks,
        framework_version=__version__,
        root=Path(root),
    )


def resolve_benchmark(registry: Registry, benchmark_name: str) -> list[TaskMetadata]:
    """Benchmark tasks in definition order; dangling references are errors."""
    bench = registry.benchmarks.get(benchmark_name)
    if bench is None:
        raise EmbenchError("unknown_benchmark", f"no benchmark named {benchmark_name!r}")
    tasks = []
    for task_name in bench.task_names:
        task = registry.tasks.get(task_name)
        if task is None:
            raise EmbenchError("unknown_task", f"benchmark {benchmark_name!r} references unknown task {task_name!r}")
        tasks.append(task)
    return tasks
