"""Task evaluators: linear-probe classification, k-means clustering,
brute-force retrieval, and STS correlation.

Every evaluator is deterministic given (embedder config, data, seed): random
choices come from a self-contained SplitMix64 generator, floating-point
reductions run left-to-right over sorted ids, and ranking ties break
lexicographically. Bounded metrics are clamped to their documented ranges to
absorb last-ulp float drift.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .datasets import TaskData
from .embedder import Embedder, EncodeContext, prepare_corpus
from .errors import EmbenchError
from .metadata import TaskMetadata

MASK64 = (1 << 64) - 1

PROBE_LEARNING_RATE = 0.5
PROBE_EPOCHS = 200
PROBE_L2 = 1e-4
KMEANS_RESTARTS = 3
KMEANS_MAX_ITER = 100
KMEANS_REL_TOL = 1e-6


@dataclass(frozen=True)
class EvalSeed:
    value: int = 42


@dataclass(frozen=True)
class TaskScores:
    task_name: str
    splits: dict[str, dict[str, float]] = field(default_factory=dict)
    main_score: float = 0.0


class SplitMix64:
    """Tiny fixed-algorithm PRNG so streams never depend on library versions."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def next_float(self) -> float:
        return self.next_u64() / 2.0**64

    def next_index(self, n: int) -> int:
        return self.next_u64() % n


def _clamp(value: float, low: float, high: float) -> float:
    return min(max(value, low), high)


# ---------------------------------------------------------------------------
# Scalar metrics


def accuracy(gold: list[str], predicted: list[str]) -> float:
    if len(gold) != len(predicted):
        raise EmbenchError("length_mismatch", f"{len(gold)} gold vs {len(predicted)} predicted")
    hits = sum(1 for g, p in zip(gold, predicted) if g == p)
    return _clamp(hits / len(gold), 0.0, 1.0)


def f1_macro(gold: list[str], predicted: list[str]) -> float:
    """Macro F1 over the union of labels seen in gold or predictions.

    Degenerate precision/recall (empty denominator) counts as 0.
    """
    if len(gold) != len(predicted):
        raise EmbenchError("length_mismatch", f"{len(gold)} gold vs {len(predicted)} predicted")
    labels = sorted(set(gold) | set(predicted))
    total = 0.0
    for label in labels:
        tp = sum(1 for g, p in zip(gold, predicted) if g == label and p == label)
        fp = sum(1 for g, p in zip(gold, predicted) if g != label and p == label)
        fn = sum(1 for g, p in zip(gold, predicted) if g == label and p != label)
        precision = tp / (tp + fp) if tp + fp > 0 else 0.0
        recall = tp / (tp + fn) if tp + fn > 0 else 0.0
        total += 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return _clamp(total / len(labels), 0.0, 1.0)


def v_measure(gold: list[str], predicted: list[str]) -> float:
    """Harmonic mean of homogeneity and completeness, natural-log entropies.

    Degenerate conventions: a single gold cluster makes completeness 1, a
    single predicted cluster makes homogeneity 1.
    """
    if len(gold) != len(predicted):
        raise EmbenchError("length_mismatch", f"{len(gold)} gold vs {len(predicted)} predicted")
    n = len(gold)
    if n == 0:
        raise EmbenchError("length_mismatch", "empty label lists")
    gold_counts = Counter(gold)
    pred_counts = Counter(predicted)
    joint_counts = Counter(zip(gold, predicted))

    def entropy(counts: Counter) -> float:
        return -sum((c / n) * math.log(c / n) for _, c in sorted(counts.items()))

    h_gold = entropy(gold_counts)
    h_pred = entropy(pred_counts)
    mutual = 0.0
    for (g, p), c in sorted(joint_counts.items()):
        mutual += (c / n) * math.log(n * c / (gold_counts[g] * pred_counts[p]))
    homogeneity = 1.0 if h_pred == 0.0 else mutual / h_pred
    completeness = 1.0 if h_gold == 0.0 else mutual / h_gold
    if homogeneity + completeness == 0.0:
        return 0.0
    return _clamp(2 * homogeneity * completeness / (homogeneity + completeness), 0.0, 1.0)


def ndcg_at_k(ranking: list[str], rels: dict[str, int], k: int) -> float:
    """Linear-gain nDCG; the ideal ranking sorts judged relevances descending."""
    dcg = 0.0
    for i, doc_id in enumerate(ranking[:k], 1):
        dcg += rels.get(doc_id, 0) / math.log2(i + 1)
    ideal = sorted(rels.values(), reverse=True)
    idcg = 0.0
    for i, rel in enumerate(ideal[:k], 1):
        idcg += rel / math.log2(i + 1)
    if idcg == 0.0:
        return 0.0
    return _clamp(dcg / idcg, 0.0, 1.0)


def map_at_k(ranking: list[str], rels: dict[str, int], k: int) -> float:
    """Average precision at k with the full positive count as denominator."""
    n_relevant = sum(1 for rel in rels.values() if rel > 0)
    if n_relevant == 0:
        return 0.0
    hits = 0
    total = 0.0
    for i, doc_id in enumerate(ranking[:k], 1):
        if rels.get(doc_id, 0) > 0:
            hits += 1
            total += hits / i
    return _clamp(total / n_relevant, 0.0, 1.0)


def recall_at_k(ranking: list[str], rels: dict[str, int], k: int) -> float:
    n_relevant = sum(1 for rel in rels.values() if rel > 0)
    if n_relevant == 0:
        return 0.0
    hits = sum(1 for doc_id in ranking[:k] if rels.get(doc_id, 0) > 0)
    return _clamp(hits / n_relevant, 0.0, 1.0)


def _average_ranks(values: list[float]) -> list[float]:
    n = len(values)
    order = sorted(range(n), key=lambda i: values[i])
    ranks = [0.0] * n
    i = 0
    while i < n:
        j = i
        while j + 1 < n and values[order[j + 1]] == values[order[i]]:
            j += 1
        mean_rank = (i + j) / 2 + 1
        for t in range(i, j + 1):
            ranks[order[t]] = mean_rank
        i = j + 1
    return ranks


def pearson(a: list[float], b: list[float]) -> float:
    if len(a) != len(b):
        raise EmbenchError("length_mismatch", f"{len(a)} vs {len(b)}")
    n = len(a)
    if n < 2:
        raise EmbenchError("constant_input", "correlation needs at least 2 points")
    mean_a = sum(a) / n
    mean_b = sum(b) / n
    var_a = sum((x - mean_a) ** 2 for x in a)
    var_b = sum((x - mean_b) ** 2 for x in b)
    if var_a == 0.0 or var_b == 0.0:
        raise EmbenchError("constant_input", "correlation of a constant series is undefined")
    cov = sum((x - mean_a) * (y - mean_b) for x, y in zip(a, b))
    return _clamp(cov / math.sqrt(var_a * var_b), -1.0, 1.0)


def spearman(a: list[float], b: list[float]) -> float:
    """Pearson correlation of average-ranked series (ties share mean rank)."""
    if len(a) != len(b):
        raise EmbenchError("length_mismatch", f"{len(a)} vs {len(b)}")
    return pearson(_average_ranks(a), _average_ranks(b))


# ---------------------------------------------------------------------------
# Linear probe


def _train_probe(train_x: np.ndarray, train_y: np.ndarray, n_classes: int) -> tuple[np.ndarray, np.ndarray]:
    n, dim = train_x.shape
    one_hot = np.zeros((n, n_classes), dtype=np.float64)
    one_hot[np.arange(n), train_y] = 1.0
    weights = np.zeros((dim, n_classes), dtype=np.float64)
    bias = np.zeros(n_classes, dtype=np.float64)
    for _ in range(PROBE_EPOCHS):
        logits = train_x @ weights + bias
        logits -= logits.max(axis=1, keepdims=True)
        probs = np.exp(logits)
        probs /= probs.sum(axis=1, keepdims=True)
        grad = (probs - one_hot) / n
        weights -= PROBE_LEARNING_RATE * (train_x.T @ grad + PROBE_L2 * weights)
        bias -= PROBE_LEARNING_RATE * grad.sum(axis=0)
    return weights, bias


def evaluate_classification(embedder: Embedder, task: TaskMetadata, data: TaskData, seed: EvalSeed) -> TaskScores:
    """Train a logistic probe on frozen train embeddings, score eval splits."""
    train_rows = data.splits.get("train")
    if not train_rows:
        raise EmbenchError("invariant_violation", f"task {task.name} has no train split")
    classes = sorted({label for _, label in train_rows})
    if len(classes) < 2:
        raise EmbenchError("degenerate_labels", f"train split has {len(classes)} class(es), need >= 2")
    class_index = {label: i for i, label in enumerate(classes)}
    ctx = EncodeContext(task_name=task.name, task_type=task.task_type, role="none",
                        language=task.languages[0] if task.languages else None)

    train_x = embedder.encode([text for text, _ in train_rows], ctx)
    train_mean = train_x.mean(axis=0)
    train_x = train_x - train_mean
    train_y = np.array([class_index[label] for _, label in train_rows], dtype=np.int64)
    weights, bias = _train_probe(train_x, train_y, len(classes))

    splits: dict[str, dict[str, float]] = {}
    for split in task.eval_splits:
        rows = data.splits.get(split)
        if rows is None:
            raise EmbenchError("invariant_violation", f"task {task.name} has no split {split!r}")
        eval_x = embedder.encode([text for text, _ in rows], ctx) - train_mean
        logits = eval_x @ weights + bias
        predictions = [classes[i] for i in np.argmax(logits, axis=1)]
        gold = [label for _, label in rows]
        splits[split] = {"accuracy": accuracy(gold, predictions), "f1_macro": f1_macro(gold, predictions)}
    return TaskScores(task_name=task.name, splits=splits,
                      main_score=splits[task.eval_splits[0]][task.main_score])


# ---------------------------------------------------------------------------
# K-means clustering


def _mix_seed(seed: int, salt: int) -> int:
    return (seed ^ ((salt + 1) * 0x9E3779B97F4A7C15)) & MASK64


def _squared_distances(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - centers[None, :, :]
    return np.sum(diff * diff, axis=2)


def _kmeans_pp_init(points: np.ndarray, k: int, rng: SplitMix64) -> np.ndarray:
    n = points.shape[0]
    chosen = [rng.next_index(n)]
    d2 = np.sum((points - points[chosen[0]]) ** 2, axis=1)
    for _ in range(k - 1):
        total = float(d2.sum())
        if total == 0.0:
            chosen.append(rng.next_index(n))
        else:
            target = rng.next_float() * total
            idx = int(np.searchsorted(np.cumsum(d2), target, side="right"))
            chosen.append(min(idx, n - 1))
        d2 = np.minimum(d2, np.sum((points - points[chosen[-1]]) ** 2, axis=1))
    return points[chosen].copy()


def _lloyd(points: np.ndarray, centers: np.ndarray) -> tuple[np.ndarray, float]:
    previous = math.inf
    labels = np.zeros(points.shape[0], dtype=np.int64)
    inertia = 0.0
    for _ in range(KMEANS_MAX_ITER):
        d2 = _squared_distances(points, centers)
        labels = np.argmin(d2, axis=1)
        inertia = float(d2[np.arange(points.shape[0]), labels].sum())
        if math.isfinite(previous) and previous - inertia <= KMEANS_REL_TOL * previous:
            break
        previous = inertia
        for c in range(centers.shape[0]):
            members = points[labels == c]
            if members.shape[0] > 0:
                centers[c] = members.mean(axis=0)
    return labels, inertia


def kmeans(points: np.ndarray, k: int, seed: EvalSeed) -> np.ndarray:
    """Deterministic k-means++: fixed restarts, lowest inertia wins, inertia
    ties keep the earliest restart."""
    if points.shape[0] < k:
        raise EmbenchError("too_few_points", f"{points.shape[0]} points for k={k}")
    best_labels = None
    best_inertia = math.inf
    for restart in range(KMEANS_RESTARTS):
        rng = SplitMix64(_mix_seed(seed.value, restart))
        centers = _kmeans_pp_init(points, k, rng)
        labels, inertia = _lloyd(points, centers)
        if inertia < best_inertia:
            best_inertia = inertia
            best_labels = labels
    return best_labels


def evaluate_clustering(embedder: Embedder, task: TaskMetadata, data: TaskData, seed: EvalSeed) -> TaskScores:
    ctx = EncodeContext(task_name=task.name, task_type=task.task_type, role="none",
                        language=task.languages[0] if task.languages else None)
    splits: dict[str, dict[str, float]] = {}
    for split in task.eval_splits:
        rows = data.splits.get(split)
        if rows is None:
            raise EmbenchError("invariant_violation", f"task {task.name} has no split {split!r}")
        gold = [cluster for _, cluster in rows]
        k = len(set(gold))
        embeddings = embedder.encode([text for text, _ in rows], ctx)
        predicted = kmeans(embeddings, k, seed)
        splits[split] = {"v_measure": v_measure(gold, [str(c) for c in predicted])}
    return TaskScores(task_name=task.name, splits=splits,
                      main_score=splits[task.eval_splits[0]][task.main_score])


# ---------------------------------------------------------------------------
# Retrieval


def _similarity_matrix(queries: np.ndarray, docs: np.ndarray, fn_name: str) -> np.ndarray:
    if fn_name == "dot":
        return queries @ docs.T
    if fn_name == "cosine":
        q_norms = np.sqrt(np.sum(queries * queries, axis=1))
        d_norms = np.sqrt(np.sum(docs * docs, axis=1))
        q_norms[q_norms == 0.0] = 1.0
        d_norms[d_norms == 0.0] = 1.0
        return (queries / q_norms[:, None]) @ (docs / d_norms[:, None]).T
    if fn_name == "euclidean":
        return -np.sqrt(np.maximum(_squared_distances(queries, docs), 0.0))
    raise EmbenchError("bad_enum", f"unknown similarity function {fn_name!r}")


def evaluate_retrieval(embedder: Embedder, task: TaskMetadata, data: TaskData, seed: EvalSeed) -> TaskScores:
    """Exact brute-force retrieval; similarity ties break by doc id."""
    if not data.corpus or not data.queries:
        raise EmbenchError("invariant_violation", f"task {task.name} has an empty corpus or query set")
    doc_ids = sorted(data.corpus)
    query_ids = sorted(data.queries)
    doc_index = {d: i for i, d in enumerate(doc_ids)}
    query_index = {q: i for i, q in enumerate(query_ids)}

    stage = None
    if embedder.meta.requires_corpus_stage:
        stage = prepare_corpus(embedder.meta, [data.corpus[d] for d in doc_ids])
    query_ctx = EncodeContext(task_name=task.name, task_type=task.task_type, role="query",
                              language=task.languages[0] if task.languages else None)
    passage_ctx = EncodeContext(task_name=task.name, task_type=task.task_type, role="passage",
                                language=task.languages[0] if task.languages else None)
    query_vecs = embedder.encode([data.queries[q] for q in query_ids], query_ctx, stage=stage)
    doc_vecs = embedder.encode([data.corpus[d] for d in doc_ids], passage_ctx, stage=stage)
    sims = _similarity_matrix(query_vecs, doc_vecs, embedder.meta.similarity_fn_name)

    splits: dict[str, dict[str, float]] = {}
    for split in task.eval_splits:
        qrels = data.qrels.get(split)
        if qrels is None:
            raise EmbenchError("invariant_violation", f"task {task.name} has no qrels for split {split!r}")
        eligible = [q for q in query_ids if any(rel > 0 for rel in qrels.get(q, {}).values())]
        if not eligible:
            raise EmbenchError("invariant_violation", f"split {split!r} has no query with a positive judgment")
        sums = {"ndcg_at_10": 0.0, "map_at_10": 0.0, "recall_at_10": 0.0}
        for query_id in eligible:
            row = sims[query_index[query_id]]
            ranking = sorted(doc_ids, key=lambda d: (-row[doc_index[d]], d))[:10]
            rels = qrels[query_id]
            sums["ndcg_at_10"] += ndcg_at_k(ranking, rels, 10)
            sums["map_at_10"] += map_at_k(ranking, rels, 10)
            sums["recall_at_10"] += recall_at_k(ranking, rels, 10)
        splits[split] = {metric: value / len(eligible) for metric, value in sums.items()}
    return TaskScores(task_name=task.name, splits=splits,
                      main_score=splits[task.eval_splits[0]][task.main_score])


# ---------------------------------------------------------------------------
# STS


def evaluate_sts(embedder: Embedder, task: TaskMetadata, data: TaskData, seed: EvalSeed) -> TaskScores:
    ctx = EncodeContext(task_name=task.name, task_type=task.task_type, role="none",
                        language=task.languages[0] if task.languages else None)
    splits: dict[str, dict[str, float]] = {}
    for split in task.eval_splits:
        rows = data.splits.get(split)
        if rows is None:
            raise EmbenchError("invariant_violation", f"task {task.name} has no split {split!r}")
        if len(rows) < 2:
            raise EmbenchError("constant_input", f"split {split!r} has fewer than 2 pairs")
        left = embedder.encode([s1 for s1, _, _ in rows], ctx)
        right = embedder.encode([s2 for _, s2, _ in rows], ctx)
        similarities = []
        for i in range(len(rows)):
            norm = math.sqrt(float(left[i] @ left[i])) * math.sqrt(float(right[i] @ right[i]))
            similarities.append(float(left[i] @ right[i]) / norm if norm > 0.0 else 0.0)
        gold = [score for _, _, score in rows]
        splits[split] = {"spearman": spearman(similarities, gold), "pearson": pearson(similarities, gold)}
    return TaskScores(task_name=task.name, splits=splits,
                      main_score=splits[task.eval_splits[0]][task.main_score])


EVALUATORS = {
    "classification": evaluate_classification,
    "clustering": evaluate_clustering,
    "retrieval": evaluate_retrieval,
    "sts": evaluate_sts,
}


def evaluate_task(embedder: Embedder, task: TaskMetadata, data: TaskData, seed: EvalSeed) -> TaskScores:
    evaluator = EVALUATORS.get(task.task_type)
    if evaluator is None:
        raise EmbenchError("bad_enum", f"no evaluator for task type {task.task_type!r}")
    return evaluator(embedder, task, data, seed)
