"""Standardized embedding interface over the three built-in embedder kinds.

Every encode call carries an EncodeContext (task, task type, role, language,
custom params) so models can condition on it the way deployed embedding
models do: role-specific prefixes, per-task-type prompts, query-only
prompting, optional output normalization, custom encode parameters, and an
optional corpus-preparation stage whose token makes passage encodings
corpus-dependent.

Built-in kinds are pure functions of (config, text, context), so identical
calls give bitwise-identical rows regardless of batch composition.
"""

from __future__ import annotations

import hashlib
import json
import math
import urllib.error
import urllib.request
from dataclasses import dataclass, field

import numpy as np

from .errors import EmbenchError
from .metadata import ModelMeta, PromptSpec

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class EncodeContext:
    """What the model is allowed to know about one encode call."""

    task_name: str
    task_type: str
    role: str = "none"
    language: str | None = None
    custom_params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class StageToken:
    """Opaque proof that prepare_corpus ran; folds the corpus identity."""

    corpus_digest: str


def resolve_prompt(spec: PromptSpec, ctx: EncodeContext) -> str:
    """Most specific matching rule wins; exactly one rule fires per call."""
    if spec.prompt_sides == "none":
        return ""
    if spec.prompt_sides == "query_only" and ctx.role == "passage":
        return ""
    key_name_role = (ctx.task_name, ctx.role)
    if key_name_role in spec.by_task_name_role:
        return spec.by_task_name_role[key_name_role]
    if ctx.task_name in spec.by_task_name:
        return spec.by_task_name[ctx.task_name]
    key_type_role = (ctx.task_type, ctx.role)
    if key_type_role in spec.by_task_type_role:
        return spec.by_task_type_role[key_type_role]
    if ctx.task_type in spec.by_task_type:
        return spec.by_task_type[ctx.task_type]
    if ctx.role in spec.by_role:
        return spec.by_role[ctx.role]
    if spec.default is not None:
        return spec.default
    return ""


def fnv1a_64(data: bytes) -> int:
    value = FNV_OFFSET
    for byte in data:
        value = ((value ^ byte) * FNV_PRIME) & MASK64
    return value


def hash_projection_encode(texts: list[str], dim: int) -> np.ndarray:
    """Signed feature-hashing of character trigrams, rows L2-normalized.

    Each trigram's 64-bit FNV-1a hash picks index h mod dim and sign from the
    high bit. Texts yielding the zero vector (shorter than 3 characters, or
    full cancellation) map to the unit basis vector e0 instead.
    """
    if dim < 2:
        raise EmbenchError("bad_dim", f"hash projection needs dim >= 2, got {dim}")
    matrix = np.zeros((len(texts), dim), dtype=np.float64)
    for row, text in enumerate(texts):
        for start in range(len(text) - 2):
            h = fnv1a_64(text[start : start + 3].encode("utf-8"))
            sign = 1.0 if h < (1 << 63) else -1.0
            matrix[row, h % dim] += sign
    norms = np.sqrt(np.sum(matrix * matrix, axis=1))
    for row in range(len(texts)):
        if norms[row] == 0.0:
            matrix[row, 0] = 1.0
            norms[row] = 1.0
    return matrix / norms[:, None]


def _seeded_row(key: bytes, dim: int) -> np.ndarray:
    blocks = []
    for counter in range((dim + 3) // 4):
        digest = hashlib.sha256(key + counter.to_bytes(8, "little")).digest()
        blocks.append(np.frombuffer(digest, dtype="<u8"))
    words = np.concatenate(blocks)[:dim].astype(np.float64)
    return words / 2.0**63 - 1.0


def seeded_random_encode(texts: list[str], dim: int, seed: int, extra_key: bytes = b"") -> np.ndarray:
    """Counter-based generator keyed on (seed, SHA-256(text)); entries in [-1, 1].

    The key depends only on the individual text, so a text's row is identical
    in every batch it appears in.
    """
    if dim < 1:
        raise EmbenchError("bad_dim", f"seeded random needs dim >= 1, got {dim}")
    seed_bytes = int(seed).to_bytes(8, "little")
    rows = []
    for text in texts:
        key = seed_bytes + hashlib.sha256(text.encode("utf-8")).digest() + extra_key
        rows.append(_seeded_row(key, dim))
    return np.stack(rows)


def prepare_corpus(meta: ModelMeta, corpus_sample: list[str]) -> StageToken:
    """Run the optional corpus stage; the token must accompany later encodes."""
    if not meta.requires_corpus_stage:
        raise EmbenchError("stage_unsupported", f"model {meta.name} declares no corpus stage")
    digest = hashlib.sha256()
    for text in corpus_sample:
        encoded = text.encode("utf-8")
        digest.update(len(encoded).to_bytes(8, "little"))
        digest.update(encoded)
    return StageToken(corpus_digest=digest.hexdigest())


def _normalize_rows(matrix: np.ndarray) -> np.ndarray:
    norms = np.sqrt(np.sum(matrix * matrix, axis=1))
    if np.any(norms == 0.0):
        raise EmbenchError("malformed_response", "cannot normalize a zero embedding")
    return matrix / norms[:, None]


def _http_post_json(url: str, body: dict, timeout_s: float) -> tuple[int, bytes]:
    request = urllib.request.Request(
        url,
        data=json.dumps(body).encode("utf-8"),
        headers={"Content-Type": "application/json"},
        method="POST",
    )
    try:
        with urllib.request.urlopen(request, timeout=timeout_s) as response:
            return response.status, response.read()
    except urllib.error.HTTPError as exc:
        return exc.code, exc.read()
    except (urllib.error.URLError, OSError, TimeoutError) as exc:
        raise EmbenchError("remote_error", f"POST {url} failed: {exc}") from exc


class Embedder:
    """Callable wrapper binding a ModelMeta to its embedding function."""

    def __init__(self, meta: ModelMeta, timeout_s: float = 10.0):
        self.meta = meta
        self.timeout_s = timeout_s

    def encode(self, texts: list[str], ctx: EncodeContext, stage: StageToken | None = None) -> np.ndarray:
        meta = self.meta
        if not texts:
            raise EmbenchError("empty_texts", "encode requires at least one text")
        if meta.requires_corpus_stage and stage is None:
            raise EmbenchError(
                "stage_missing", f"model {meta.name} requires prepare_corpus before encoding"
            )
        prompt = resolve_prompt(meta.prompts, ctx)
        prompted = [prompt + text for text in texts]

        if meta.embedder_kind == "seeded_random":
            extra = b""
            variant = ctx.custom_params.get("variant")
            if variant is not None:
                extra += hashlib.sha256(str(variant).encode("utf-8")).digest()
            if stage is not None and ctx.role == "passage":
                extra += bytes.fromhex(stage.corpus_digest)
            seed = int(meta.embedder_config.get("seed", 0))
            matrix = seeded_random_encode(prompted, meta.embed_dim, seed, extra)
        elif meta.embedder_kind == "hash_projection":
            if stage is not None and ctx.role == "passage":
                salt = stage.corpus_digest[:16] + "\0"
                prompted = [salt + text for text in prompted]
            matrix = hash_projection_encode(prompted, meta.embed_dim)
        elif meta.embedder_kind == "remote":
            matrix = self._remote_encode(prompted, prompt, ctx)
        else:
            raise EmbenchError("bad_enum", f"unknown embedder kind {meta.embedder_kind!r}")

        if meta.normalize_embeddings:
            matrix = _normalize_rows(matrix)
        return matrix

    def _remote_encode(self, prompted: list[str], prompt: str, ctx: EncodeContext) -> np.ndarray:
        endpoint = str(self.meta.embedder_config.get("endpoint", "")).rstrip("/")
        body = {
            "texts": prompted,
            "task_name": ctx.task_name,
            "task_type": ctx.task_type,
            "role": ctx.role,
            "prompt": prompt,
            "custom_params": dict(ctx.custom_params),
        }
        status, payload = _http_post_json(endpoint + "/encode", body, self.timeout_s)
        if status != 200:
            raise EmbenchError("remote_error", f"endpoint returned status {status}")
        try:
            obj = json.loads(payload.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise EmbenchError("malformed_response", f"response is not JSON: {exc}") from exc
        if not isinstance(obj, dict) or "embeddings" not in obj or "dim" not in obj:
            raise EmbenchError("malformed_response", "response must carry embeddings and dim")
        if obj["dim"] != self.meta.embed_dim:
            raise EmbenchError(
                "dimension_mismatch", f"endpoint dim {obj['dim']} != declared embed_dim {self.meta.embed_dim}"
            )
        rows = obj["embeddings"]
        if not isinstance(rows, list) or len(rows) != len(prompted):
            raise EmbenchError("malformed_response", "one embedding row required per text")
        matrix = np.empty((len(rows), self.meta.embed_dim), dtype=np.float64)
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != self.meta.embed_dim:
                raise EmbenchError(
                    "dimension_mismatch", f"row {i} has length {len(row) if isinstance(row, list) else 'n/a'}"
                )
            for j, value in enumerate(row):
                if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                    raise EmbenchError("malformed_response", f"row {i} entry {j} is not a finite number")
                matrix[i, j] = float(value)
        return matrix


def build_embedder(meta: ModelMeta, timeout_s: float = 10.0) -> Embedder:
    return Embedder(meta, timeout_s=timeout_s)
