"""Builders shared across test modules: parse mock records into dataclasses,
fabricate result records, and byte-compare result trees."""

from __future__ import annotations

import json
from pathlib import Path

from embench import __version__
from embench.canonical import canonical_bytes
from embench.evaluators import TaskScores
from embench.metadata import ModelMeta, TaskMetadata, parse_model_meta, parse_task_meta, validate_model_meta, validate_task_meta
from embench.mocks import model_obj, task_obj
from embench.results import ResultRecord, now_timestamp

ZERO_REV = "0" * 64


def make_model(name: str = "org/model", kind: str = "seeded_random", dim: int = 16,
               *, config: dict | None = None, **overrides) -> ModelMeta:
    if kind == "seeded_random" and config is None:
        config = {"seed": 7}
    obj = model_obj(name, kind, dim, embedder_config=config, **overrides)
    meta, defects = parse_model_meta(obj)
    assert meta is not None and not defects, defects
    defects = validate_model_meta(meta)
    assert not defects, defects
    return meta


def make_task(name: str = "some-task", task_type: str = "classification",
              *, revision: str = ZERO_REV, **overrides) -> TaskMetadata:
    obj = task_obj(name, task_type, f"datasets/{name}", revision, **overrides)
    meta, defects = parse_task_meta(obj)
    assert meta is not None and not defects, defects
    defects = validate_task_meta(meta)
    assert not defects, defects
    return meta


def make_result(model_name: str, task: TaskMetadata, main: float,
                *, model_revision: str = "r1", framework: str = __version__,
                started_at: str | None = None) -> ResultRecord:
    metric = task.main_score
    scores = TaskScores(task_name=task.name,
                        splits={task.eval_splits[0]: {metric: main}},
                        main_score=main)
    return ResultRecord(task_name=task.name, task_revision=task.dataset_revision,
                        model_name=model_name, model_revision=model_revision,
                        framework_version=framework, scores=scores,
                        evaluation_time_s=0.25,
                        started_at=started_at or now_timestamp())


def result_tree_bytes(root: Path, *, drop: tuple[str, ...] = ("started_at",)) -> dict[str, bytes]:
    """Relative path -> canonical bytes with volatile fields removed."""
    out: dict[str, bytes] = {}
    for path in sorted(root.rglob("*.json")):
        obj = json.loads(path.read_text(encoding="utf-8"))
        for key in drop:
            obj.pop(key, None)
        out[str(path.relative_to(root))] = canonical_bytes(obj)
    return out
