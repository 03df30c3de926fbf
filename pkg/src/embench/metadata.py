"""Metadata schemas and validation for models, tasks, and benchmarks.

Records live as UTF-8 JSON, one record per file, under a registry root:
``models/<org>/<model>.json``, ``tasks/<task_name>.json``,
``benchmarks/<benchmark_name>.json``.

Parsing is strict: unknown top-level keys, missing fields, and mistyped
values are all defects.  Validation never raises; defects are returned as
plain values with machine-readable codes so callers (registry loading, the
``validate`` CLI) can aggregate a full report instead of stopping at the
first problem.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import date
from urllib.parse import urlparse

LANGUAGE_CODE_RE = re.compile(r"^[a-z]{3}-[A-Z][a-z]{3}$")
NAME_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")
REVISION_RE = re.compile(r"^[0-9a-f]{64}$")

TASK_TYPES = ("classification", "clustering", "retrieval", "sts")
SIMILARITY_FNS = ("cosine", "dot", "euclidean")
EMBEDDER_KINDS = ("seeded_random", "hash_projection", "remote")
PROMPT_SIDES = ("both", "query_only", "none")
ROLES = ("query", "passage", "none")

# Metrics each evaluator emits; a task's main_score must name one of its
# task type's metrics.
METRICS_BY_TASK_TYPE = {
    "classification": ("accuracy", "f1_macro"),
    "clustering": ("v_measure",),
    "retrieval": ("ndcg_at_10", "map_at_10", "recall_at_10"),
    "sts": ("spearman", "pearson"),
}

MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class Defect:
    """One violated invariant: where, what, and a human-readable why."""

    path: str
    code: str
    message: str


@dataclass(frozen=True)
class PromptSpec:
    """Prompt-resolution rules, most specific first (see embedder.resolve_prompt).

    Prompts are plain strings prepended verbatim to every text; there is no
    template expansion.  ``prompt_sides`` controls which retrieval roles
    receive prompts: ``both`` (default), ``query_only``, or ``none``.
    """

    by_task_name: dict[str, str] = field(default_factory=dict)
    by_task_name_role: dict[tuple[str, str], str] = field(default_factory=dict)
    by_task_type: dict[str, str] = field(default_factory=dict)
    by_task_type_role: dict[tuple[str, str], str] = field(default_factory=dict)
    by_role: dict[str, str] = field(default_factory=dict)
    default: str | None = None
    prompt_sides: str = "both"


@dataclass(frozen=True)
class ModelMeta:
    """Everything the harness records about one embedding model."""

    name: str
    embedder_kind: str
    embed_dim: int
    release_date: str
    license: str
    open_weights: bool
    similarity_fn_name: str
    framework: tuple[str, ...]
    reference: str
    languages: tuple[str, ...]
    use_instructions: bool
    is_cross_encoder: bool
    normalize_embeddings: bool
    requires_corpus_stage: bool
    embedder_config: dict[str, object] = field(default_factory=dict)
    n_parameters: int | None = None
    memory_usage_mb: float | None = None
    max_tokens: int | None = None
    revision: str | None = None
    public_training_code: str | None = None
    public_training_data: str | None = None
    # Absent (None) means the training data is undisclosed; an empty mapping
    # asserts the model was trained on none of the benchmark datasets.
    training_datasets: dict[str, tuple[str, ...]] | None = None
    adapted_from: str | None = None
    superseded_by: str | None = None
    modalities: tuple[str, ...] = ("text",)
    prompts: PromptSpec = field(default_factory=PromptSpec)


@dataclass(frozen=True)
class TaskMetadata:
    """One evaluation task: dataset pin, splits, and scoring contract."""

    name: str
    task_type: str
    dataset_path: str
    dataset_revision: str
    languages: tuple[str, ...]
    eval_splits: tuple[str, ...]
    main_score: str
    domains: tuple[str, ...]
    description: str
    citation: str | None = None


@dataclass(frozen=True)
class BenchmarkDef:
    """Named, versioned collection of tasks aggregated into one table."""

    name: str
    display_name: str
    version: str
    task_names: tuple[str, ...]
    citation: str | None = None
    group: str | None = None  # display-only leaderboard grouping


def validate_language_code(value: str) -> list[Defect]:
    """Check the ``xxx-Xxxx`` ISO 639-3 + ISO 15924 form, e.g. ``eng-Latn``."""
    if isinstance(value, str) and LANGUAGE_CODE_RE.match(value):
        return []
    return [
        Defect(
            path="",
            code="bad_language_format",
            message=f"language code {value!r} does not match xxx-Xxxx",
        )
    ]


def _is_http_url(value: str) -> bool:
    try:
        parts = urlparse(value)
    except ValueError:
        return False
    return parts.scheme in ("http", "https") and bool(parts.netloc)


def _is_iso_date(value: str) -> bool:
    try:
        date.fromisoformat(value)
    except ValueError:
        return False
    return True


# ---------------------------------------------------------------------------
# Parsing (structure: presence, types, unknown keys)


class _Parser:
    """Pulls typed fields out of a raw JSON object, recording defects."""

    def __init__(self, obj: dict):
        self.obj = obj
        self.defects: list[Defect] = []
        self.seen: set[str] = set()
        self.ok = True

    def _check(self, path: str, value, kind) -> bool:
        if kind is bool:
            good = isinstance(value, bool)
        elif kind is int:
            good = isinstance(value, int) and not isinstance(value, bool)
        elif kind is float:
            good = isinstance(value, (int, float)) and not isinstance(value, bool)
        elif kind is str:
            good = isinstance(value, str)
        elif kind is dict:
            good = isinstance(value, dict)
        elif kind == "list_str":
            good = isinstance(value, list) and all(isinstance(v, str) for v in value)
        else:  # pragma: no cover - programming error
            raise AssertionError(kind)
        if not good:
            self.defects.append(
                Defect(path=path, code="bad_type", message=f"{path} has wrong type")
            )
        return good

    def req(self, key: str, kind):
        self.seen.add(key)
        if key not in self.obj:
            self.defects.append(
                Defect(path=key, code="missing_field", message=f"required field {key} absent")
            )
            self.ok = False
            return None
        value = self.obj[key]
        if not self._check(key, value, kind):
            self.ok = False
            return None
        return value

    def opt(self, key: str, kind, default=None):
        self.seen.add(key)
        value = self.obj.get(key)
        if value is None:
            return default
        if not self._check(key, value, kind):
            self.ok = False
            return default
        return value

    def finish(self):
        for key in sorted(set(self.obj) - self.seen):
            self.defects.append(
                Defect(path=key, code="unknown_key", message=f"unknown field {key}")
            )
            self.ok = False


def _parse_prompt_spec(obj, defects: list[Defect]) -> PromptSpec:
    if not isinstance(obj, dict):
        defects.append(Defect(path="prompts", code="bad_type", message="prompts must be an object"))
        return PromptSpec()
    known = {
        "by_task_name",
        "by_task_name_role",
        "by_task_type",
        "by_task_type_role",
        "by_role",
        "default",
        "prompt_sides",
    }
    for key in sorted(set(obj) - known):
        defects.append(
            Defect(path=f"prompts.{key}", code="unknown_key", message=f"unknown prompts field {key}")
        )

    def flat(key) -> dict[str, str]:
        raw = obj.get(key) or {}
        if not isinstance(raw, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in raw.items()
        ):
            defects.append(
                Defect(path=f"prompts.{key}", code="bad_type", message=f"prompts.{key} must map strings to strings")
            )
            return {}
        return dict(raw)

    def nested(key) -> dict[tuple[str, str], str]:
        raw = obj.get(key) or {}
        out: dict[tuple[str, str], str] = {}
        if not isinstance(raw, dict):
            defects.append(
                Defect(path=f"prompts.{key}", code="bad_type", message=f"prompts.{key} must be an object")
            )
            return out
        for outer, inner in raw.items():
            if not isinstance(inner, dict) or not all(
                isinstance(k, str) and isinstance(v, str) for k, v in inner.items()
            ):
                defects.append(
                    Defect(
                        path=f"prompts.{key}.{outer}",
                        code="bad_type",
                        message="role map must map role strings to prompt strings",
                    )
                )
                continue
            for role, prompt in inner.items():
                out[(outer, role)] = prompt
        return out

    default = obj.get("default")
    if default is not None and not isinstance(default, str):
        defects.append(Defect(path="prompts.default", code="bad_type", message="default prompt must be a string"))
        default = None
    sides = obj.get("prompt_sides", "both")
    if not isinstance(sides, str):
        defects.append(Defect(path="prompts.prompt_sides", code="bad_type", message="prompt_sides must be a string"))
        sides = "both"
    return PromptSpec(
        by_task_name=flat("by_task_name"),
        by_task_name_role=nested("by_task_name_role"),
        by_task_type=flat("by_task_type"),
        by_task_type_role=nested("by_task_type_role"),
        by_role=flat("by_role"),
        default=default,
        prompt_sides=sides,
    )


def parse_model_meta(obj: dict) -> tuple[ModelMeta | None, list[Defect]]:
    """Parse a raw JSON object into a ModelMeta; structural defects only."""
    p = _Parser(obj)
    name = p.req("name", str)
    kind = p.req("embedder_kind", str)
    embed_dim = p.req("embed_dim", int)
    release_date = p.req("release_date", str)
    license_ = p.req("license", str)
    open_weights = p.req("open_weights", bool)
    similarity = p.req("similarity_fn_name", str)
    framework = p.req("framework", "list_str")
    reference = p.req("reference", str)
    languages = p.req("languages", "list_str")
    use_instructions = p.req("use_instructions", bool)
    is_cross_encoder = p.req("is_cross_encoder", bool)
    normalize = p.req("normalize_embeddings", bool)
    requires_stage = p.req("requires_corpus_stage", bool)

    config = p.opt("embedder_config", dict, {})
    n_parameters = p.opt("n_parameters", int)
    memory_usage_mb = p.opt("memory_usage_mb", float)
    max_tokens = p.opt("max_tokens", int)
    revision = p.opt("revision", str)
    training_code = p.opt("public_training_code", str)
    training_data = p.opt("public_training_data", str)
    adapted_from = p.opt("adapted_from", str)
    superseded_by = p.opt("superseded_by", str)
    modalities = p.opt("modalities", "list_str", ["text"])

    p.seen.add("training_datasets")
    training_datasets = None
    raw_td = obj.get("training_datasets")
    if raw_td is not None:
        if isinstance(raw_td, dict) and all(
            isinstance(k, str) and isinstance(v, list) and all(isinstance(s, str) for s in v)
            for k, v in raw_td.items()
        ):
            training_datasets = {k: tuple(v) for k, v in raw_td.items()}
        else:
            p.defects.append(
                Defect(
                    path="training_datasets",
                    code="bad_type",
                    message="training_datasets must map task names to lists of split names",
                )
            )
            p.ok = False

    p.seen.add("prompts")
    prompts = PromptSpec()
    if "prompts" in obj:
        prompts = _parse_prompt_spec(obj["prompts"], p.defects)

    p.finish()
    if not p.ok:
        return None, p.defects
    meta = ModelMeta(
        name=name,
        embedder_kind=kind,
        embed_dim=embed_dim,
        release_date=release_date,
        license=license_,
        open_weights=open_weights,
        similarity_fn_name=similarity,
        framework=tuple(framework),
        reference=reference,
        languages=tuple(languages),
        use_instructions=use_instructions,
        is_cross_encoder=is_cross_encoder,
        normalize_embeddings=normalize,
        requires_corpus_stage=requires_stage,
        embedder_config=dict(config),
        n_parameters=n_parameters,
        memory_usage_mb=None if memory_usage_mb is None else float(memory_usage_mb),
        max_tokens=max_tokens,
        revision=revision,
        public_training_code=training_code,
        public_training_data=training_data,
        training_datasets=training_datasets,
        adapted_from=adapted_from,
        superseded_by=superseded_by,
        modalities=tuple(modalities),
        prompts=prompts,
    )
    return meta, p.defects


def parse_task_meta(obj: dict) -> tuple[TaskMetadata | None, list[Defect]]:
    p = _Parser(obj)
    name = p.req("name", str)
    task_type = p.req("task_type", str)
    dataset_path = p.req("dataset_path", str)
    dataset_revision = p.req("dataset_revision", str)
    languages = p.req("languages", "list_str")
    eval_splits = p.req("eval_splits", "list_str")
    main_score = p.req("main_score", str)
    domains = p.req("domains", "list_str")
    description = p.req("description", str)
    citation = p.opt("citation", str)
    p.finish()
    if not p.ok:
        return None, p.defects
    meta = TaskMetadata(
        name=name,
        task_type=task_type,
        dataset_path=dataset_path,
        dataset_revision=dataset_revision,
        languages=tuple(languages),
        eval_splits=tuple(eval_splits),
        main_score=main_score,
        domains=tuple(domains),
        description=description,
        citation=citation,
    )
    return meta, p.defects


def parse_benchmark(obj: dict) -> tuple[BenchmarkDef | None, list[Defect]]:
    p = _Parser(obj)
    name = p.req("name", str)
    display_name = p.req("display_name", str)
    version = p.req("version", str)
    task_names = p.req("task_names", "list_str")
    citation = p.opt("citation", str)
    group = p.opt("group", str)
    p.finish()
    if not p.ok:
        return None, p.defects
    return (
        BenchmarkDef(
            name=name,
            display_name=display_name,
            version=version,
            task_names=tuple(task_names),
            citation=citation,
            group=group,
        ),
        p.defects,
    )


# ---------------------------------------------------------------------------
# Validation (semantic invariants over parsed records)


def validate_model_meta(meta: ModelMeta) -> list[Defect]:
    """Return every violated ModelMeta invariant, in field order."""
    defects: list[Defect] = []

    def bad(path, code, message):
        defects.append(Defect(path=path, code=code, message=message))

    parts = meta.name.split("/")
    if len(parts) != 2 or not parts[0] or not parts[1]:
        bad("name", "bad_model_name", f"model name {meta.name!r} must be organization/model_name")
    if meta.embedder_kind not in EMBEDDER_KINDS:
        bad("embedder_kind", "bad_enum", f"unknown embedder kind {meta.embedder_kind!r}")
    if meta.embed_dim < 1:
        bad("embed_dim", "nonpositive_embed_dim", f"embed_dim must be >= 1, got {meta.embed_dim}")
    if meta.n_parameters is not None and meta.n_parameters < 0:
        bad("n_parameters", "negative_value", "n_parameters must be non-negative")
    if meta.memory_usage_mb is not None and meta.memory_usage_mb < 0:
        bad("memory_usage_mb", "negative_value", "memory_usage_mb must be non-negative")
    if meta.max_tokens is not None and meta.max_tokens < 1:
        bad("max_tokens", "nonpositive_value", "max_tokens must be positive")
    if not _is_iso_date(meta.release_date):
        bad("release_date", "bad_date", f"release_date {meta.release_date!r} is not an ISO-8601 date")
    if meta.similarity_fn_name not in SIMILARITY_FNS:
        bad("similarity_fn_name", "bad_enum", f"unknown similarity function {meta.similarity_fn_name!r}")
    if not _is_http_url(meta.reference):
        bad("reference", "bad_url", f"reference {meta.reference!r} is not an http(s) URL")
    for i, code in enumerate(meta.languages):
        for d in validate_language_code(code):
            defects.append(Defect(path=f"languages[{i}]", code=d.code, message=d.message))
    for path, url in (
        ("public_training_code", meta.public_training_code),
        ("public_training_data", meta.public_training_data),
    ):
        if url is not None and not _is_http_url(url):
            bad(path, "bad_url", f"{path} {url!r} is not an http(s) URL")
    for path, ref in (("adapted_from", meta.adapted_from), ("superseded_by", meta.superseded_by)):
        if ref is not None:
            ref_parts = ref.split("/")
            if len(ref_parts) != 2 or not ref_parts[0] or not ref_parts[1]:
                bad(path, "bad_model_name", f"{path} {ref!r} must be organization/model_name")

    defects.extend(_validate_embedder_config(meta))
    defects.extend(_validate_prompt_spec(meta.prompts))
    return defects


def _validate_embedder_config(meta: ModelMeta) -> list[Defect]:
    defects: list[Defect] = []
    config = meta.embedder_config
    if meta.embedder_kind == "seeded_random":
        allowed = {"seed"}
        seed = config.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool) or not (0 <= seed <= MAX_SEED):
            defects.append(
                Defect(
                    path="embedder_config.seed",
                    code="bad_seed",
                    message="seed must be an unsigned 64-bit integer",
                )
            )
    elif meta.embedder_kind == "hash_projection":
        allowed = set()
    elif meta.embedder_kind == "remote":
        allowed = {"endpoint", "dim"}
        endpoint = config.get("endpoint")
        if endpoint is None:
            defects.append(
                Defect(
                    path="embedder_config.endpoint",
                    code="missing_endpoint",
                    message="remote embedder requires an endpoint URL",
                )
            )
        elif not isinstance(endpoint, str) or not _is_http_url(endpoint):
            defects.append(
                Defect(
                    path="embedder_config.endpoint",
                    code="bad_url",
                    message=f"remote endpoint {endpoint!r} is not an http(s) URL",
                )
            )
        dim = config.get("dim")
        if dim is not None:
            if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
                defects.append(
                    Defect(
                        path="embedder_config.dim",
                        code="bad_type",
                        message="remote dim must be a positive integer",
                    )
                )
            elif dim != meta.embed_dim:
                defects.append(
                    Defect(
                        path="embedder_config.dim",
                        code="remote_dim_mismatch",
                        message=f"remote endpoint dim {dim} != embed_dim {meta.embed_dim}",
                    )
                )
    else:
        return defects  # unknown kind already flagged
    for key in sorted(set(config) - allowed):
        defects.append(
            Defect(
                path=f"embedder_config.{key}",
                code="unknown_key",
                message=f"{meta.embedder_kind} config does not accept {key!r}",
            )
        )
    return defects


def _validate_prompt_spec(spec: PromptSpec) -> list[Defect]:
    defects: list[Defect] = []
    if spec.prompt_sides not in PROMPT_SIDES:
        defects.append(
            Defect(
                path="prompts.prompt_sides",
                code="bad_enum",
                message=f"prompt_sides must be one of {PROMPT_SIDES}, got {spec.prompt_sides!r}",
            )
        )
    for role in sorted(spec.by_role):
        if role not in ROLES:
            defects.append(
                Defect(path=f"prompts.by_role.{role}", code="bad_enum", message=f"unknown role {role!r}")
            )
    for task_type in sorted(spec.by_task_type):
        if task_type not in TASK_TYPES:
            defects.append(
                Defect(
                    path=f"prompts.by_task_type.{task_type}",
                    code="bad_enum",
                    message=f"unknown task type {task_type!r}",
                )
            )
    for key, _ in sorted(spec.by_task_type_role):
        if key not in TASK_TYPES:
            defects.append(
                Defect(
                    path=f"prompts.by_task_type_role.{key}",
                    code="bad_enum",
                    message=f"unknown task type {key!r}",
                )
            )
            break
    for (_, role) in sorted(spec.by_task_name_role.keys() | spec.by_task_type_role.keys()):
        if role not in ROLES:
            defects.append(
                Defect(path="prompts", code="bad_enum", message=f"unknown role {role!r} in role-keyed prompts")
            )
            break
    return defects


def validate_task_meta(meta: TaskMetadata) -> list[Defect]:
    """Return every violated TaskMetadata invariant, in field order."""
    defects: list[Defect] = []

    def bad(path, code, message):
        defects.append(Defect(path=path, code=code, message=message))

    if not NAME_RE.match(meta.name):
        bad("name", "bad_task_name", f"task name {meta.name!r} is not filesystem-safe")
    if meta.task_type not in TASK_TYPES:
        bad("task_type", "bad_enum", f"unknown task type {meta.task_type!r}")
    if not meta.dataset_path:
        bad("dataset_path", "empty_path", "dataset_path must be non-empty")
    if not REVISION_RE.match(meta.dataset_revision):
        bad(
            "dataset_revision",
            "bad_revision",
            "dataset_revision must be 64 lowercase hex characters",
        )
    for i, code in enumerate(meta.languages):
        for d in validate_language_code(code):
            defects.append(Defect(path=f"languages[{i}]", code=d.code, message=d.message))
    if not meta.eval_splits:
        bad("eval_splits", "empty_splits", "eval_splits must be non-empty")
    elif len(set(meta.eval_splits)) != len(meta.eval_splits):
        bad("eval_splits", "duplicate_split", "eval_splits contains duplicate names")
    if meta.task_type in METRICS_BY_TASK_TYPE and meta.main_score not in METRICS_BY_TASK_TYPE[meta.task_type]:
        bad(
            "main_score",
            "metric_task_mismatch",
            f"main_score {meta.main_score!r} is not produced by the {meta.task_type} evaluator",
        )
    return defects


def validate_benchmark(bench: BenchmarkDef) -> list[Defect]:
    defects: list[Defect] = []
    if not NAME_RE.match(bench.name):
        defects.append(
            Defect(path="name", code="bad_benchmark_name", message=f"benchmark name {bench.name!r} is not filesystem-safe")
        )
    if not bench.task_names:
        defects.append(Defect(path="task_names", code="empty_tasks", message="task_names must be non-empty"))
    elif len(set(bench.task_names)) != len(bench.task_names):
        defects.append(
            Defect(path="task_names", code="duplicate_task", message="task_names contains duplicates")
        )
    return defects


# ---------------------------------------------------------------------------
# Serialization back to the JSON form parse accepts


def prompt_spec_to_obj(spec: PromptSpec) -> dict:
    obj: dict = {}
    if spec.by_task_name:
        obj["by_task_name"] = dict(sorted(spec.by_task_name.items()))
    if spec.by_task_name_role:
        nested: dict[str, dict[str, str]] = {}
        for (name, role), prompt in sorted(spec.by_task_name_role.items()):
            nested.setdefault(name, {})[role] = prompt
        obj["by_task_name_role"] = nested
    if spec.by_task_type:
        obj["by_task_type"] = dict(sorted(spec.by_task_type.items()))
    if spec.by_task_type_role:
        nested = {}
        for (task_type, role), prompt in sorted(spec.by_task_type_role.items()):
            nested.setdefault(task_type, {})[role] = prompt
        obj["by_task_type_role"] = nested
    if spec.by_role:
        obj["by_role"] = dict(sorted(spec.by_role.items()))
    if spec.default is not None:
        obj["default"] = spec.default
    if spec.prompt_sides != "both":
        obj["prompt_sides"] = spec.prompt_sides
    return obj


def model_meta_to_obj(meta: ModelMeta) -> dict:
    obj = {
        "name": meta.name,
        "embedder_kind": meta.embedder_kind,
        "embed_dim": meta.embed_dim,
        "release_date": meta.release_date,
        "license": meta.license,
        "open_weights": meta.open_weights,
        "similarity_fn_name": meta.similarity_fn_name,
        "framework": list(meta.framework),
        "reference": meta.reference,
        "languages": list(meta.languages),
        "use_instructions": meta.use_instructions,
        "is_cross_encoder": meta.is_cross_encoder,
        "normalize_embeddings": meta.normalize_embeddings,
        "requires_corpus_stage": meta.requires_corpus_stage,
        "modalities": list(meta.modalities),
    }
    if meta.embedder_config:
        obj["embedder_config"] = dict(meta.embedder_config)
    for key in (
        "n_parameters",
        "memory_usage_mb",
        "max_tokens",
        "revision",
        "public_training_code",
        "public_training_data",
        "adapted_from",
        "superseded_by",
    ):
        value = getattr(meta, key)
        if value is not None:
            obj[key] = value
    if meta.training_datasets is not None:
        obj["training_datasets"] = {k: list(v) for k, v in sorted(meta.training_datasets.items())}
    prompts = prompt_spec_to_obj(meta.prompts)
    if prompts:
        obj["prompts"] = prompts
    return obj


def task_meta_to_obj(meta: TaskMetadata) -> dict:
    obj = {
        "name": meta.name,
        "task_type": meta.task_type,
        "dataset_path": meta.dataset_path,
        "dataset_revision": meta.dataset_revision,
        "languages": list(meta.languages),
        "eval_splits": list(meta.eval_splits),
        "main_score": meta.main_score,
        "domains": list(meta.domains),
        "description": meta.description,
    }
    if meta.citation is not None:
        obj["citation"] = meta.citation
    return obj


def benchmark_to_obj(bench: BenchmarkDef) -> dict:
    obj = {
        "name": bench.name,
        "display_name": bench.display_name,
        "version": bench.version,
        "task_names": list(bench.task_names),
    }
    if bench.citation is not None:
        obj["citation"] = bench.citation
    if bench.group is not None:
        obj["group"] = bench.group
    return obj
