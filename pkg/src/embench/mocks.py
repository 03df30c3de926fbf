"""Mock registry construction for tests, demos, and local experiments.

Builds a small but complete registry: two synthetic models (one random, one
trigram-hashing), four tasks covering every task type with a handful of
illustrative examples each, and one benchmark spanning them. Dataset files
are written deterministically and their revision pins are computed from the
bytes actually on disk, so the tree always validates clean.
"""

from __future__ import annotations

from pathlib import Path

from .canonical import canonical_dumps, write_canonical_json
from .datasets import canonical_hash

CLASSIFICATION_TRAIN = [
    ("the blender crushed the ice in seconds", "appliance"),
    ("this toaster browns bread evenly every morning", "appliance"),
    ("the vacuum picked up every crumb from the rug", "appliance"),
    ("a quiet dishwasher that finishes in an hour", "appliance"),
    ("the kettle boils water faster than the stove", "appliance"),
    ("the fridge keeps vegetables crisp for weeks", "appliance"),
    ("the roses bloomed along the back fence", "garden"),
    ("tomato seedlings need six hours of sun", "garden"),
    ("mulch keeps the soil moist through summer", "garden"),
    ("prune the apple tree before spring growth", "garden"),
    ("the lawn turned green after the first rain", "garden"),
    ("plant bulbs in autumn for early flowers", "garden"),
]

CLASSIFICATION_TEST = [
    ("the microwave reheats soup without splatter", "appliance"),
    ("this oven preheats quickly and bakes evenly", "appliance"),
    ("the dryer leaves towels soft and warm", "appliance"),
    ("a freezer chest that holds a month of meals", "appliance"),
    ("water the ferns twice a week in the shade", "garden"),
    ("the hedge needs trimming before the frost", "garden"),
    ("compost enriches the beds for next season", "garden"),
    ("sunflowers lean toward the morning light", "garden"),
]

CLUSTERING_TEST = [
    ("rain moved in from the coast overnight", "weather"),
    ("the forecast calls for snow flurries", "weather"),
    ("humid afternoons end in thunderstorms", "weather"),
    ("a cold front drops temperatures tonight", "weather"),
    ("simmer the sauce until it thickens", "cooking"),
    ("knead the dough for ten minutes", "cooking"),
    ("roast the peppers until the skins char", "cooking"),
    ("whisk the eggs with a pinch of salt", "cooking"),
    ("the striker scored in extra time", "sports"),
    ("the relay team set a national record", "sports"),
    ("the goalkeeper saved a late penalty", "sports"),
    ("the marathon route climbs two steep hills", "sports"),
]

RETRIEVAL_CORPUS = [
    ("d1", "the lighthouse keeper logs every passing ship"),
    ("d2", "ferries cross the strait twice a day"),
    ("d3", "the observatory tracks meteor showers in august"),
    ("d4", "tide pools shelter crabs and anemones"),
    ("d5", "the harbor market sells smoked fish at dawn"),
    ("d6", "a chartered boat tours the offshore reef"),
]

RETRIEVAL_QUERIES = [
    ("q1", "who logs ships passing the lighthouse"),
    ("q2", "when to watch meteor showers"),
    ("q3", "where to buy smoked fish in the harbor"),
]

RETRIEVAL_QRELS_TEST = [
    ("q1", "d1", 2),
    ("q1", "d2", 1),
    ("q2", "d3", 2),
    ("q3", "d5", 2),
    ("q3", "d6", 1),
]

STS_TEST = [
    ("a cat sleeps on the warm windowsill", "a cat naps in the sunny window", 4.8),
    ("the train departs at noon", "the train leaves at twelve", 4.5),
    ("he painted the fence white", "the fence was given a coat of white paint", 3.9),
    ("she plays violin in the orchestra", "she repairs violins for a living", 2.2),
    ("the stock market rallied today", "fresh bread smells wonderful", 0.4),
    ("children built a sandcastle", "the committee approved the budget", 0.1),
]


def write_jsonl(path: Path, rows: list[dict]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as handle:
        for row in rows:
            handle.write(canonical_dumps(row) + "\n")


def model_obj(
    name: str,
    embedder_kind: str,
    embed_dim: int,
    *,
    embedder_config: dict | None = None,
    **overrides,
) -> dict:
    """Fully populated model record; keyword overrides replace any field."""
    obj = {
        "name": name,
        "embedder_kind": embedder_kind,
        "embed_dim": embed_dim,
        "release_date": "2025-11-03",
        "license": "mit",
        "open_weights": True,
        "similarity_fn_name": "cosine",
        "framework": ["embench"],
        "reference": f"https://example.org/models/{name.replace('/', '-')}",
        "languages": ["eng-Latn"],
        "use_instructions": False,
        "is_cross_encoder": False,
        "normalize_embeddings": True,
        "requires_corpus_stage": False,
    }
    if embedder_config is not None:
        obj["embedder_config"] = embedder_config
    for key, value in overrides.items():
        if value is None:
            obj.pop(key, None)
        else:
            obj[key] = value
    return obj


def task_obj(name: str, task_type: str, dataset_path: str, dataset_revision: str, **overrides) -> dict:
    main_scores = {
        "classification": "accuracy",
        "clustering": "v_measure",
        "retrieval": "ndcg_at_10",
        "sts": "spearman",
    }
    obj = {
        "name": name,
        "task_type": task_type,
        "dataset_path": dataset_path,
        "dataset_revision": dataset_revision,
        "languages": ["eng-Latn"],
        "eval_splits": ["test"],
        "main_score": main_scores[task_type],
        "domains": ["fiction"],
        "description": f"mock {task_type} task with a handful of illustrative examples",
    }
    for key, value in overrides.items():
        if value is None:
            obj.pop(key, None)
        else:
            obj[key] = value
    return obj


def build_demo_datasets(root: Path) -> dict[str, str]:
    """Write the four demo datasets; returns task name -> revision pin."""
    root = Path(root)
    cls_dir = root / "datasets" / "mock-classification"
    write_jsonl(cls_dir / "train.jsonl", [{"text": t, "label": l} for t, l in CLASSIFICATION_TRAIN])
    write_jsonl(cls_dir / "test.jsonl", [{"text": t, "label": l} for t, l in CLASSIFICATION_TEST])

    clu_dir = root / "datasets" / "mock-clustering"
    write_jsonl(clu_dir / "test.jsonl", [{"text": t, "cluster": c} for t, c in CLUSTERING_TEST])

    ret_dir = root / "datasets" / "mock-retrieval"
    write_jsonl(ret_dir / "corpus.jsonl", [{"_id": i, "text": t} for i, t in RETRIEVAL_CORPUS])
    write_jsonl(ret_dir / "queries.jsonl", [{"_id": i, "text": t} for i, t in RETRIEVAL_QUERIES])
    qrels_path = ret_dir / "qrels" / "test.tsv"
    qrels_path.parent.mkdir(parents=True, exist_ok=True)
    qrels_path.write_text(
        "".join(f"{q}\t{d}\t{rel}\n" for q, d, rel in RETRIEVAL_QRELS_TEST), encoding="utf-8"
    )

    sts_dir = root / "datasets" / "mock-sts"
    write_jsonl(
        sts_dir / "test.jsonl",
        [{"sentence1": a, "sentence2": b, "score": s} for a, b, s in STS_TEST],
    )

    return {
        "mock-classification": canonical_hash(cls_dir).revision,
        "mock-clustering": canonical_hash(clu_dir).revision,
        "mock-retrieval": canonical_hash(ret_dir).revision,
        "mock-sts": canonical_hash(sts_dir).revision,
    }


def build_demo_registry(root: Path) -> Path:
    """Create a complete valid registry under root; returns root."""
    root = Path(root)
    revisions = build_demo_datasets(root)

    write_canonical_json(
        root / "tasks" / "mock-classification.json",
        task_obj("mock-classification", "classification",
                 "datasets/mock-classification", revisions["mock-classification"],
                 domains=["reviews"]),
    )
    write_canonical_json(
        root / "tasks" / "mock-clustering.json",
        task_obj("mock-clustering", "clustering",
                 "datasets/mock-clustering", revisions["mock-clustering"],
                 domains=["news"]),
    )
    write_canonical_json(
        root / "tasks" / "mock-retrieval.json",
        task_obj("mock-retrieval", "retrieval",
                 "datasets/mock-retrieval", revisions["mock-retrieval"],
                 domains=["travel"]),
    )
    write_canonical_json(
        root / "tasks" / "mock-sts.json",
        task_obj("mock-sts", "sts",
                 "datasets/mock-sts", revisions["mock-sts"],
                 domains=["news"], languages=["eng-Latn", "fra-Latn"]),
    )

    write_canonical_json(
        root / "models" / "mock" / "seeded-norm.json",
        model_obj(
            "mock/seeded-norm",
            "seeded_random",
            16,
            embedder_config={"seed": 7},
            revision="r1",
            n_parameters=120000,
            memory_usage_mb=1.5,
            max_tokens=512,
            training_datasets={"mock-classification": ["train"]},
        ),
    )
    write_canonical_json(
        root / "models" / "mock" / "trigram.json",
        model_obj(
            "mock/trigram",
            "hash_projection",
            32,
            revision="r2",
            use_instructions=True,
            prompts={"by_role": {"query": "query: ", "passage": "passage: "}},
        ),
    )

    write_canonical_json(
        root / "benchmarks" / "mock-suite.json",
        {
            "name": "mock-suite",
            "display_name": "Mock Suite",
            "version": "1.0.0",
            "task_names": ["mock-classification", "mock-clustering", "mock-retrieval", "mock-sts"],
            "group": "demo",
        },
    )
    return root


DEMO_MODELS = ("mock/seeded-norm", "mock/trigram")
DEMO_BENCHMARK = "mock-suite"
