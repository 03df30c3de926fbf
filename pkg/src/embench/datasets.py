"""Dataset handlers: canonical file formats, content-hash pins, loading.

A dataset is a directory. Its identity is a manifest of SHA-256 digests over
every regular file, combined into a single revision hash that TaskMetadata
pins. Loading always re-verifies the pin before parsing, so stale or tampered
data surfaces as `revision_mismatch` rather than as silently different scores.

Formats, one task type each:
  classification  <split>.jsonl   {"text": str, "label": str}
  clustering      <split>.jsonl   {"text": str, "cluster": str}
  sts             <split>.jsonl   {"sentence1": str, "sentence2": str, "score": number}
  retrieval       corpus.jsonl / queries.jsonl ({"_id": str, "text": str})
                  qrels/<split>.tsv  query_id <TAB> doc_id <TAB> relevance
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import EmbenchError
from .metadata import Defect, TaskMetadata


@dataclass(frozen=True)
class DatasetManifest:
    files: tuple[tuple[str, str], ...]
    revision: str


def canonical_hash(dataset_dir: Path) -> DatasetManifest:
    """Hash every regular file; the revision covers paths and contents both."""
    root = Path(dataset_dir)
    if not root.is_dir():
        raise EmbenchError("io_error", f"dataset directory {root} does not exist")
    entries = []
    for file in sorted(p for p in root.rglob("*") if p.is_file()):
        digest = hashlib.sha256(file.read_bytes()).hexdigest()
        entries.append((file.relative_to(root).as_posix(), digest))
    entries.sort(key=lambda e: e[0])
    combined = hashlib.sha256()
    for path, digest in entries:
        combined.update(f"{path}\0{digest}\n".encode("utf-8"))
    return DatasetManifest(files=tuple(entries), revision=combined.hexdigest())


def verify_manifest(dataset_dir: Path, expected_revision: str) -> list[Defect]:
    manifest = canonical_hash(dataset_dir)
    if manifest.revision == expected_revision:
        return []
    return [
        Defect(
            path="",
            code="revision_mismatch",
            message=f"dataset at {dataset_dir} hashes to {manifest.revision}, pin is {expected_revision}",
        )
    ]


@dataclass(frozen=True)
class TaskData:
    """Loaded dataset content, shaped by task type.

    splits carries per-split rows for classification (text, label),
    clustering (text, cluster), and sts (sentence1, sentence2, score).
    Retrieval uses corpus/queries/qrels instead, qrels keyed by split.
    """

    task_type: str
    splits: dict[str, list] = field(default_factory=dict)
    corpus: dict[str, str] = field(default_factory=dict)
    queries: dict[str, str] = field(default_factory=dict)
    qrels: dict[str, dict[str, dict[str, int]]] = field(default_factory=dict)


def _format_error(file: Path, line_no: int, message: str) -> EmbenchError:
    return EmbenchError("format_error", f"{file}:{line_no}: {message}")


def _read_jsonl(file: Path, keys: tuple[str, ...]) -> list[dict]:
    if not file.is_file():
        raise EmbenchError("invariant_violation", f"required dataset file {file} is missing")
    rows = []
    with file.open("r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, 1):
            line = line.strip("\n")
            if not line:
                raise _format_error(file, line_no, "blank line")
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise _format_error(file, line_no, f"invalid JSON: {exc}") from exc
            if not isinstance(obj, dict) or set(obj) != set(keys):
                raise _format_error(file, line_no, f"object keys must be exactly {sorted(keys)}")
            rows.append(obj)
    return rows


def _read_text_rows(file: Path, text_key: str, tag_key: str) -> list[tuple[str, str]]:
    rows = []
    for line_no, obj in enumerate(_read_jsonl(file, (text_key, tag_key)), 1):
        if not isinstance(obj[text_key], str) or not isinstance(obj[tag_key], str):
            raise _format_error(file, line_no, f"{text_key} and {tag_key} must be strings")
        rows.append((obj[text_key], obj[tag_key]))
    return rows


def _read_id_text(file: Path) -> dict[str, str]:
    out: dict[str, str] = {}
    for line_no, obj in enumerate(_read_jsonl(file, ("_id", "text")), 1):
        if not isinstance(obj["_id"], str) or not isinstance(obj["text"], str):
            raise _format_error(file, line_no, "_id and text must be strings")
        if obj["_id"] in out:
            raise _format_error(file, line_no, f"duplicate _id {obj['_id']!r}")
        out[obj["_id"]] = obj["text"]
    return out


def _read_qrels(file: Path) -> dict[str, dict[str, int]]:
    if not file.is_file():
        raise EmbenchError("invariant_violation", f"required qrels file {file} is missing")
    qrels: dict[str, dict[str, int]] = {}
    with file.open("r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, 1):
            line = line.rstrip("\n")
            if not line:
                raise _format_error(file, line_no, "blank line")
            parts = line.split("\t")
            if len(parts) != 3:
                raise _format_error(file, line_no, "expected query_id<TAB>doc_id<TAB>relevance")
            query_id, doc_id, rel_text = parts
            try:
                relevance = int(rel_text)
            except ValueError as exc:
                raise _format_error(file, line_no, f"relevance {rel_text!r} is not an integer") from exc
            if relevance < 0:
                raise _format_error(file, line_no, "relevance must be >= 0")
            per_query = qrels.setdefault(query_id, {})
            if doc_id in per_query:
                raise _format_error(file, line_no, f"duplicate judgment for ({query_id!r}, {doc_id!r})")
            per_query[doc_id] = relevance
    return qrels


def load_dataset(meta: TaskMetadata, base_dir: Path = Path(".")) -> TaskData:
    """Verify the revision pin, then parse and check task-type invariants."""
    directory = Path(meta.dataset_path)
    if not directory.is_absolute():
        directory = Path(base_dir) / directory
    problems = verify_manifest(directory, meta.dataset_revision)
    if problems:
        raise EmbenchError("revision_mismatch", problems[0].message)

    if meta.task_type == "classification":
        wanted = ["train"] + [s for s in meta.eval_splits if s != "train"]
        splits = {s: _read_text_rows(directory / f"{s}.jsonl", "text", "label") for s in wanted}
        train_labels = {label for _, label in splits["train"]}
        if len(train_labels) < 2:
            raise EmbenchError(
                "invariant_violation", f"train split of {meta.name} has {len(train_labels)} distinct label(s), need >= 2"
            )
        return TaskData(task_type="classification", splits=splits)

    if meta.task_type == "clustering":
        splits = {s: _read_text_rows(directory / f"{s}.jsonl", "text", "cluster") for s in meta.eval_splits}
        for split, rows in splits.items():
            clusters = {cluster for _, cluster in rows}
            if len(clusters) < 2:
                raise EmbenchError(
                    "invariant_violation", f"split {split!r} of {meta.name} has {len(clusters)} distinct cluster(s), need >= 2"
                )
        return TaskData(task_type="clustering", splits=splits)

    if meta.task_type == "sts":
        splits: dict[str, list] = {}
        for split in meta.eval_splits:
            file = directory / f"{split}.jsonl"
            rows = []
            for line_no, obj in enumerate(_read_jsonl(file, ("sentence1", "sentence2", "score")), 1):
                if not isinstance(obj["sentence1"], str) or not isinstance(obj["sentence2"], str):
                    raise _format_error(file, line_no, "sentence1 and sentence2 must be strings")
                score = obj["score"]
                if isinstance(score, bool) or not isinstance(score, (int, float)):
                    raise _format_error(file, line_no, "score must be a number")
                score = float(score)
                if not math.isfinite(score):
                    raise EmbenchError("invariant_violation", f"{file}:{line_no}: gold score must be finite")
                rows.append((obj["sentence1"], obj["sentence2"], score))
            splits[split] = rows
        return TaskData(task_type="sts", splits=splits)

    if meta.task_type == "retrieval":
        corpus = _read_id_text(directory / "corpus.jsonl")
        queries = _read_id_text(directory / "queries.jsonl")
        qrels: dict[str, dict[str, dict[str, int]]] = {}
        for split in meta.eval_splits:
            per_split = _read_qrels(directory / "qrels" / f"{split}.tsv")
            for query_id, per_query in per_split.items():
                if query_id not in queries:
                    raise EmbenchError(
                        "invariant_violation", f"qrels split {split!r} references unknown query {query_id!r}"
                    )
                for doc_id in per_query:
                    if doc_id not in corpus:
                        raise EmbenchError(
                            "invariant_violation", f"qrels split {split!r} references unknown document {doc_id!r}"
                        )
            qrels[split] = per_split
        return TaskData(task_type="retrieval", corpus=corpus, queries=queries, qrels=qrels)

    raise EmbenchError("invariant_violation", f"unsupported task type {meta.task_type!r}")


def workload_texts(data: TaskData, eval_splits: tuple[str, ...]) -> int:
    """Number of texts an evaluation of this data encodes.

    Used for the deterministic default duration estimate in result records.
    """
    if data.task_type == "classification":
        return len(data.splits.get("train", [])) + sum(len(data.splits[s]) for s in eval_splits if s in data.splits)
    if data.task_type == "clustering":
        return sum(len(rows) for rows in data.splits.values())
    if data.task_type == "sts":
        return 2 * sum(len(rows) for rows in data.splits.values())
    if data.task_type == "retrieval":
        return len(data.queries) + len(data.corpus)
    return 0
