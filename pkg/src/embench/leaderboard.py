"""Leaderboard aggregation: zero-shot scoring, Borda ranking, filterable
benchmark tables, markdown/CSV exports, and registry coverage statistics.

A table is a pure function of (registry contents, results scan, filter):
tasks are filtered first, then models by the zero-shot threshold, and means,
Borda points, and zero-shot scores are all recomputed over the filtered task
set. Rows are models that have at least one result on the filtered tasks.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .datasets import load_dataset
from .errors import EmbenchError
from .metadata import ModelMeta, TaskMetadata
from .registry import Registry, resolve_benchmark
from .results import ScanResult


@dataclass(frozen=True)
class ZeroShotAssessment:
    """z = 1 - n_train/n_total when training data is disclosed, else unknown.

    n_train counts benchmark tasks whose name appears in the model's
    training_datasets, regardless of which splits are listed. z of None
    means unknown (undisclosed training data).
    """

    n_total: int
    n_train: int | None
    z: float | None


@dataclass(frozen=True)
class BenchmarkFilter:
    """Empty filter is the identity; language/domain matching is any-overlap."""

    task_types: frozenset[str] | None = None
    languages: frozenset[str] | None = None
    domains: frozenset[str] | None = None
    min_zero_shot: float | None = None
    include_unknown_zero_shot: bool = True


@dataclass(frozen=True)
class LeaderboardRow:
    model_name: str
    mean_score: float
    per_task_type: dict[str, float]
    per_task: dict[str, float]
    borda_points: float
    borda_rank: int
    zero_shot: ZeroShotAssessment
    n_parameters: int | None
    missing_tasks: tuple[str, ...]


@dataclass(frozen=True)
class LeaderboardTable:
    benchmark_name: str
    task_names: tuple[str, ...]
    task_types: tuple[str, ...]
    rows: tuple[LeaderboardRow, ...]


def zero_shot_score(
    model: ModelMeta,
    benchmark_tasks: list[TaskMetadata],
    models_by_name: dict[str, ModelMeta] | None = None,
    include_adapted: bool = False,
) -> ZeroShotAssessment:
    """Dataset-level training overlap with the benchmark.

    With include_adapted, training_datasets are unioned along the
    adapted_from chain; any undisclosed link makes the result unknown.
    """
    if not benchmark_tasks:
        raise EmbenchError("empty_input", "zero-shot score needs at least one benchmark task")
    n_total = len(benchmark_tasks)
    trained: set[str] = set()
    current: ModelMeta | None = model
    visited: set[str] = set()
    while current is not None:
        if current.training_datasets is None:
            return ZeroShotAssessment(n_total=n_total, n_train=None, z=None)
        trained.update(current.training_datasets)
        if not include_adapted or current.adapted_from is None:
            break
        if current.name in visited:
            break
        visited.add(current.name)
        current = (models_by_name or {}).get(current.adapted_from)
    n_train = sum(1 for task in benchmark_tasks if task.name in trained)
    return ZeroShotAssessment(n_total=n_total, n_train=n_train, z=1 - n_train / n_total)


def borda_rank(scores: dict[str, dict[str, float]]) -> dict[str, tuple[float, int]]:
    """Borda points and competition ranks over per-task scores.

    Per task, only scoring models compete: position i of m (1-based,
    descending score) earns m - i points, a tied span earns the arithmetic
    mean of its span's points, and missing the task earns 0. Total points
    descending give ranks; point ties share the smaller rank number.
    """
    if not scores:
        raise EmbenchError("empty_input", "Borda ranking needs at least one model")
    models = sorted(scores)
    tasks = sorted({task for per_task in scores.values() for task in per_task})
    points = {model: 0.0 for model in models}
    for task in tasks:
        scored = sorted(
            ((scores[model][task], model) for model in models if task in scores[model]),
            key=lambda pair: (-pair[0], pair[1]),
        )
        m = len(scored)
        i = 0
        while i < m:
            j = i
            while j + 1 < m and scored[j + 1][0] == scored[i][0]:
                j += 1
            span_points = (2 * (m - 1) - i - j) / 2
            for t in range(i, j + 1):
                points[scored[t][1]] += span_points
            i = j + 1
    ordered = sorted(models, key=lambda model: (-points[model], model))
    ranks: dict[str, int] = {}
    for position, model in enumerate(ordered, 1):
        previous = ordered[position - 2] if position > 1 else None
        ranks[model] = ranks[previous] if previous is not None and points[model] == points[previous] else position
    return {model: (points[model], ranks[model]) for model in models}


def _task_matches(task: TaskMetadata, filt: BenchmarkFilter) -> bool:
    if filt.task_types is not None and task.task_type not in filt.task_types:
        return False
    if filt.languages is not None and not (set(task.languages) & filt.languages):
        return False
    if filt.domains is not None and not (set(task.domains) & filt.domains):
        return False
    return True


def _model_passes(assessment: ZeroShotAssessment, filt: BenchmarkFilter) -> bool:
    if assessment.z is None:
        return filt.include_unknown_zero_shot
    if filt.min_zero_shot is None:
        return True
    return assessment.z >= filt.min_zero_shot


def aggregate_table(
    registry: Registry,
    scan: ScanResult,
    benchmark_name: str,
    filt: BenchmarkFilter = BenchmarkFilter(),
) -> LeaderboardTable:
    tasks = resolve_benchmark(registry, benchmark_name)
    filtered_tasks = [task for task in tasks if _task_matches(task, filt)]
    if not filtered_tasks:
        raise EmbenchError("empty_after_filter", f"no task of {benchmark_name!r} survives the filter")
    task_names = [task.name for task in filtered_tasks]
    task_name_set = set(task_names)

    candidates = sorted(
        model
        for model, per_task in scan.by_model.items()
        if model in registry.models and task_name_set & set(per_task)
    )
    assessments = {
        model: zero_shot_score(registry.models[model], filtered_tasks, registry.models)
        for model in candidates
    }
    kept = [model for model in candidates if _model_passes(assessments[model], filt)]
    if candidates and not kept:
        raise EmbenchError("empty_after_filter", f"no model of {benchmark_name!r} survives the zero-shot filter")

    per_model_scores = {
        model: {
            task: scan.by_model[model][task].scores.main_score
            for task in task_names
            if task in scan.by_model[model]
        }
        for model in kept
    }
    borda = borda_rank(per_model_scores) if kept else {}

    type_of = {task.name: task.task_type for task in filtered_tasks}
    rows = []
    for model in kept:
        per_task = per_model_scores[model]
        present = [task for task in task_names if task in per_task]
        mean_score = sum(per_task[task] for task in present) / len(present)
        per_type: dict[str, float] = {}
        for task_type in sorted({type_of[task] for task in present}):
            typed = [task for task in present if type_of[task] == task_type]
            per_type[task_type] = sum(per_task[task] for task in typed) / len(typed)
        points, rank = borda[model]
        rows.append(
            LeaderboardRow(
                model_name=model,
                mean_score=mean_score,
                per_task_type=per_type,
                per_task=dict(per_task),
                borda_points=points,
                borda_rank=rank,
                zero_shot=assessments[model],
                n_parameters=registry.models[model].n_parameters,
                missing_tasks=tuple(task for task in task_names if task not in per_task),
            )
        )
    rows.sort(key=lambda row: (row.borda_rank, row.model_name))
    return LeaderboardTable(
        benchmark_name=benchmark_name,
        task_names=tuple(task_names),
        task_types=tuple(sorted({task.task_type for task in filtered_tasks})),
        rows=tuple(rows),
    )


def zero_shot_to_obj(assessment: ZeroShotAssessment) -> dict:
    return {"n_total": assessment.n_total, "n_train": assessment.n_train, "z": assessment.z}


def table_to_obj(table: LeaderboardTable) -> dict:
    return {
        "benchmark_name": table.benchmark_name,
        "task_names": list(table.task_names),
        "task_types": list(table.task_types),
        "rows": [
            {
                "model_name": row.model_name,
                "mean_score": row.mean_score,
                "per_task_type": dict(row.per_task_type),
                "per_task": dict(row.per_task),
                "borda_points": row.borda_points,
                "borda_rank": row.borda_rank,
                "zero_shot": zero_shot_to_obj(row.zero_shot),
                "n_parameters": row.n_parameters,
                "missing_tasks": list(row.missing_tasks),
            }
            for row in table.rows
        ],
    }


def _format_zero_shot(assessment: ZeroShotAssessment) -> str:
    return "?" if assessment.z is None else f"{assessment.z * 100:.0f}%"


def render_markdown_table(table: LeaderboardTable) -> str:
    """GitHub-flavored pipe table, scores to 2 decimals, fully deterministic."""
    headers = ["rank", "model", "mean"] + list(table.task_types) + ["zero-shot", "parameters"]
    lines = [
        "| " + " | ".join(headers) + " |",
        "|" + "|".join("---:" if h not in ("model",) else ":---" for h in headers) + "|",
    ]
    for row in table.rows:
        cells = [str(row.borda_rank), row.model_name, f"{row.mean_score:.2f}"]
        for task_type in table.task_types:
            value = row.per_task_type.get(task_type)
            cells.append("-" if value is None else f"{value:.2f}")
        cells.append(_format_zero_shot(row.zero_shot))
        cells.append("?" if row.n_parameters is None else str(row.n_parameters))
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def export_scatter(table: LeaderboardTable) -> str:
    """CSV of model, mean_score, zero_shot, n_parameters; rows by model name."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["model", "mean_score", "zero_shot", "n_parameters"])
    for row in sorted(table.rows, key=lambda r: r.model_name):
        writer.writerow([
            row.model_name,
            repr(row.mean_score),
            "" if row.zero_shot.z is None else repr(row.zero_shot.z),
            "" if row.n_parameters is None else str(row.n_parameters),
        ])
    return buffer.getvalue()


def coverage_report(registry: Registry) -> dict:
    """Per-task descriptive statistics plus repository-wide language coverage.

    Text-length quartiles use linear interpolation between order statistics.
    """
    tasks_out: dict[str, dict] = {}
    language_counts: dict[str, int] = {}
    for name in sorted(registry.tasks):
        meta = registry.tasks[name]
        data = load_dataset(meta, base_dir=registry.root)
        lengths: list[int] = []
        entry: dict = {"task_type": meta.task_type}
        if meta.task_type == "classification":
            entry["splits"] = {split: len(rows) for split, rows in sorted(data.splits.items())}
            labels: dict[str, int] = {}
            for rows in data.splits.values():
                for text, label in rows:
                    lengths.append(len(text))
                    labels[label] = labels.get(label, 0) + 1
            entry["label_counts"] = dict(sorted(labels.items()))
        elif meta.task_type == "clustering":
            entry["splits"] = {split: len(rows) for split, rows in sorted(data.splits.items())}
            clusters: dict[str, int] = {}
            for rows in data.splits.values():
                for text, cluster in rows:
                    lengths.append(len(text))
                    clusters[cluster] = clusters.get(cluster, 0) + 1
            entry["cluster_counts"] = dict(sorted(clusters.items()))
        elif meta.task_type == "sts":
            entry["splits"] = {split: len(rows) for split, rows in sorted(data.splits.items())}
            for rows in data.splits.values():
                for sentence1, sentence2, _ in rows:
                    lengths.append(len(sentence1))
                    lengths.append(len(sentence2))
        elif meta.task_type == "retrieval":
            entry["splits"] = {split: sum(len(v) for v in qrels.values())
                               for split, qrels in sorted(data.qrels.items())}
            entry["corpus_size"] = len(data.corpus)
            entry["n_queries"] = len(data.queries)
            lengths.extend(len(text) for _, text in sorted(data.corpus.items()))
            lengths.extend(len(text) for _, text in sorted(data.queries.items()))
        if lengths:
            q1, q2, q3 = np.percentile(np.array(lengths, dtype=np.float64), [25, 50, 75])
            entry["text_length_quartiles"] = [float(q1), float(q2), float(q3)]
        else:
            entry["text_length_quartiles"] = None
        tasks_out[name] = entry
        for code in meta.languages:
            language_counts[code] = language_counts.get(code, 0) + 1
    return {"tasks": tasks_out, "languages": dict(sorted(language_counts.items()))}
