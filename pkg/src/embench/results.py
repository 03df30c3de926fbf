"""Result records and the results repository.

Records are canonical JSON files under
``<root>/<org>__<model>/<model_revision>/<task_name>.json``, each stamping
the framework version, the model revision, and the dataset revision the
scores were produced against. Canonical serialization makes equal records
byte-equal, which the determinism checks rely on; writes are atomic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .canonical import atomic_write_bytes, canonical_bytes
from .errors import EmbenchError
from .evaluators import TaskScores
from .metadata import METRICS_BY_TASK_TYPE, Defect
from .registry import Registry, try_parse_semver

TIMESTAMP_FORMAT = "%Y-%m-%dT%H:%M:%S.%fZ"

_BOUNDS = {
    "accuracy": (0.0, 1.0),
    "f1_macro": (0.0, 1.0),
    "v_measure": (0.0, 1.0),
    "ndcg_at_10": (0.0, 1.0),
    "map_at_10": (0.0, 1.0),
    "recall_at_10": (0.0, 1.0),
    "spearman": (-1.0, 1.0),
    "pearson": (-1.0, 1.0),
}

_KNOWN_METRICS = {metric for metrics in METRICS_BY_TASK_TYPE.values() for metric in metrics}


@dataclass(frozen=True)
class ResultRecord:
    task_name: str
    task_revision: str
    model_name: str
    model_revision: str
    framework_version: str
    scores: TaskScores
    evaluation_time_s: float
    started_at: str
    kg_co2_emissions: float | None = None


def now_timestamp() -> str:
    return datetime.now(timezone.utc).strftime(TIMESTAMP_FORMAT)


def parse_timestamp(text: str) -> datetime:
    try:
        return datetime.strptime(text, TIMESTAMP_FORMAT).replace(tzinfo=timezone.utc)
    except ValueError as exc:
        raise EmbenchError("bad_timestamp", f"{text!r} is not an ISO-8601 UTC timestamp") from exc


def validate_result(record: ResultRecord) -> list[Defect]:
    """Every violated record invariant, as value-level defects."""
    defects: list[Defect] = []

    def bad(path, code, message):
        defects.append(Defect(path=path, code=code, message=message))

    parts = record.model_name.split("/")
    if len(parts) != 2 or not parts[0] or not parts[1]:
        bad("model_name", "bad_model_name", f"{record.model_name!r} must be organization/model_name")
    if not record.task_name:
        bad("task_name", "bad_task_name", "task_name must be non-empty")
    if len(record.task_revision) != 64 or any(c not in "0123456789abcdef" for c in record.task_revision):
        bad("task_revision", "bad_revision", "task_revision must be 64 lowercase hex characters")
    if not record.model_revision or "/" in record.model_revision or record.model_revision in (".", ".."):
        bad("model_revision", "bad_revision", f"model_revision {record.model_revision!r} is not path-safe")
    if try_parse_semver(record.framework_version) is None:
        bad("framework_version", "bad_semver", f"{record.framework_version!r} is not MAJOR.MINOR.PATCH")
    if not (isinstance(record.evaluation_time_s, (int, float))
            and math.isfinite(record.evaluation_time_s) and record.evaluation_time_s >= 0):
        bad("evaluation_time_s", "negative_value", "evaluation_time_s must be a non-negative finite number")
    if record.kg_co2_emissions is not None and not (
            isinstance(record.kg_co2_emissions, (int, float))
            and math.isfinite(record.kg_co2_emissions) and record.kg_co2_emissions >= 0):
        bad("kg_co2_emissions", "negative_value", "kg_co2_emissions must be a non-negative finite number")
    try:
        parse_timestamp(record.started_at)
    except EmbenchError:
        bad("started_at", "bad_timestamp", f"started_at {record.started_at!r} is not an ISO-8601 UTC timestamp")

    if record.scores.task_name != record.task_name:
        bad("scores.task_name", "name_mismatch", "scores.task_name must equal the record task_name")
    if not record.scores.splits:
        bad("scores.splits", "empty_splits", "scores must cover at least one split")
    if not (isinstance(record.scores.main_score, (int, float)) and math.isfinite(record.scores.main_score)):
        bad("scores.main_score", "bad_score", "main_score must be a finite number")
    for split in sorted(record.scores.splits):
        metrics = record.scores.splits[split]
        for metric in sorted(metrics):
            value = metrics[metric]
            path = f"scores.splits.{split}.{metric}"
            if metric not in _KNOWN_METRICS:
                bad(path, "unknown_metric", f"unknown metric {metric!r}")
                continue
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                bad(path, "bad_score", f"{metric} must be a finite number")
                continue
            low, high = _BOUNDS[metric]
            if not (low <= value <= high):
                bad(path, "score_out_of_range", f"{metric}={value} outside [{low}, {high}]")
    return defects


def record_to_obj(record: ResultRecord) -> dict:
    obj = {
        "task_name": record.task_name,
        "task_revision": record.task_revision,
        "model_name": record.model_name,
        "model_revision": record.model_revision,
        "framework_version": record.framework_version,
        "scores": {
            "task_name": record.scores.task_name,
            "main_score": record.scores.main_score,
            "splits": {split: dict(metrics) for split, metrics in sorted(record.scores.splits.items())},
        },
        "evaluation_time_s": record.evaluation_time_s,
        "started_at": record.started_at,
    }
    if record.kg_co2_emissions is not None:
        obj["kg_co2_emissions"] = record.kg_co2_emissions
    return obj


def parse_result_obj(obj: dict) -> tuple[ResultRecord | None, list[Defect]]:
    defects: list[Defect] = []
    required = {
        "task_name": str, "task_revision": str, "model_name": str, "model_revision": str,
        "framework_version": str, "scores": dict, "evaluation_time_s": (int, float), "started_at": str,
    }
    values = {}
    for key, kind in required.items():
        if key not in obj:
            defects.append(Defect(path=key, code="missing_field", message=f"required field {key} absent"))
            continue
        value = obj[key]
        if isinstance(value, bool) or not isinstance(value, kind):
            defects.append(Defect(path=key, code="bad_type", message=f"{key} has wrong type"))
            continue
        values[key] = value
    kg = obj.get("kg_co2_emissions")
    if kg is not None and (isinstance(kg, bool) or not isinstance(kg, (int, float))):
        defects.append(Defect(path="kg_co2_emissions", code="bad_type", message="kg_co2_emissions must be a number"))
        kg = None
    for key in sorted(set(obj) - set(required) - {"kg_co2_emissions"}):
        defects.append(Defect(path=key, code="unknown_key", message=f"unknown field {key}"))
    if defects:
        return None, defects

    raw_scores = values["scores"]
    score_keys = {"task_name", "main_score", "splits"}
    for key in sorted(set(raw_scores) - score_keys):
        defects.append(Defect(path=f"scores.{key}", code="unknown_key", message=f"unknown field scores.{key}"))
    splits_obj = raw_scores.get("splits")
    if (not isinstance(raw_scores.get("task_name"), str)
            or isinstance(raw_scores.get("main_score"), bool)
            or not isinstance(raw_scores.get("main_score"), (int, float))
            or not isinstance(splits_obj, dict)):
        defects.append(Defect(path="scores", code="bad_type",
                              message="scores must carry task_name, main_score, and splits"))
    else:
        for split, metrics in sorted(splits_obj.items()):
            if not isinstance(metrics, dict) or not all(
                    isinstance(m, str) and not isinstance(v, bool) and isinstance(v, (int, float))
                    for m, v in metrics.items()):
                defects.append(Defect(path=f"scores.splits.{split}", code="bad_type",
                                      message="split scores must map metric names to numbers"))
    if defects:
        return None, defects

    scores = TaskScores(
        task_name=raw_scores["task_name"],
        splits={split: {m: float(v) for m, v in metrics.items()} for split, metrics in splits_obj.items()},
        main_score=float(raw_scores["main_score"]),
    )
    record = ResultRecord(
        task_name=values["task_name"],
        task_revision=values["task_revision"],
        model_name=values["model_name"],
        model_revision=values["model_revision"],
        framework_version=values["framework_version"],
        scores=scores,
        evaluation_time_s=float(values["evaluation_time_s"]),
        started_at=values["started_at"],
        kg_co2_emissions=None if kg is None else float(kg),
    )
    return record, []


def model_dir_name(model_name: str) -> str:
    return model_name.replace("/", "__")


def result_path(repo_root: Path, record: ResultRecord) -> Path:
    return Path(repo_root) / model_dir_name(record.model_name) / record.model_revision / f"{record.task_name}.json"


def write_result(repo_root: Path, record: ResultRecord) -> Path:
    defects = validate_result(record)
    if defects:
        summary = "; ".join(f"{d.path}:{d.code}" for d in defects)
        raise EmbenchError("invalid_record", f"record rejected: {summary}")
    path = result_path(repo_root, record)
    atomic_write_bytes(path, canonical_bytes(record_to_obj(record)))
    return path


def read_result(path: Path) -> ResultRecord:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise EmbenchError("io_error", f"cannot read {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise EmbenchError("format_error", f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise EmbenchError("format_error", f"{path}: top-level value must be an object")
    record, defects = parse_result_obj(obj)
    if record is not None:
        defects = defects + validate_result(record)
    if defects:
        summary = "; ".join(f"{d.path}:{d.code}" for d in defects)
        raise EmbenchError("invalid_record", f"{path}: {summary}")
    return record


@dataclass
class ScanResult:
    """Newest valid record per (model, task), plus everything set aside."""

    by_model: dict[str, dict[str, ResultRecord]] = field(default_factory=dict)
    excluded: list[tuple[str, str]] = field(default_factory=list)


def scan_results_repo(repo_root: Path, registry: Registry) -> ScanResult:
    """Index a results tree against the registry's framework version.

    Per (model, task) the newest started_at wins; timestamp ties break by
    model_revision then path so the outcome never depends on scan order.
    Records from a different framework major version are excluded and
    reported, not silently dropped.
    """
    root = Path(repo_root)
    if not root.is_dir():
        raise EmbenchError("io_error", f"results root {root} is not a directory")
    framework = try_parse_semver(registry.framework_version)
    if framework is None:
        raise EmbenchError("bad_semver", f"registry framework_version {registry.framework_version!r}")
    scan = ScanResult()
    chosen: dict[tuple[str, str], tuple] = {}
    for path in sorted(root.glob("*/*/*.json")):
        if path.name.startswith("."):
            continue
        try:
            record = read_result(path)
        except EmbenchError as exc:
            scan.excluded.append((str(path), str(exc)))
            continue
        version = try_parse_semver(record.framework_version)
        if version.major != framework.major:
            scan.excluded.append(
                (str(path), f"incompatible_version: record framework {record.framework_version} "
                            f"vs running {registry.framework_version}")
            )
            continue
        key = (record.model_name, record.task_name)
        order = (parse_timestamp(record.started_at), record.model_revision, str(path))
        if key not in chosen or order > chosen[key][0]:
            chosen[key] = (order, record)
    for (model_name, task_name), (_, record) in sorted(chosen.items()):
        scan.by_model.setdefault(model_name, {})[task_name] = record
    return scan


def estimate_emissions(duration_s: float, power_w: float, intensity_kg_per_kwh: float) -> float:
    """kgCO2e = hours x kW x grid intensity."""
    if duration_s < 0 or power_w < 0 or intensity_kg_per_kwh < 0:
        raise EmbenchError("negative_input", "duration, power, and intensity must be non-negative")
    return duration_s / 3600 * (power_w / 1000) * intensity_kg_per_kwh
