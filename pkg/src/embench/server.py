"""HTTP JSON API over a registry and results repository.

Read-only endpoints, canonical JSON bodies, permissive CORS so a local
frontend can fetch across ports:

  GET /api/benchmarks
  GET /api/benchmarks/{name}/table?task_types=&languages=&domains=
      &min_zero_shot=&include_unknown=
  GET /api/models/{org}__{model}
  GET /api/coverage

Unknown query parameters are rejected with status 400 and a defect body.
The results scan is a consistent snapshot refreshed when older than the
configured interval.
"""

from __future__ import annotations

import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qsl, unquote, urlsplit

from .canonical import canonical_bytes
from .errors import EmbenchError
from .leaderboard import (
    BenchmarkFilter,
    aggregate_table,
    coverage_report,
    table_to_obj,
)
from .metadata import model_meta_to_obj
from .registry import Registry, load_registry
from .results import ScanResult, model_dir_name, record_to_obj, scan_results_repo

TABLE_PARAMS = ("task_types", "languages", "domains", "min_zero_shot", "include_unknown")


def _defect_body(path: str, code: str, message: str) -> dict:
    return {"defects": [{"path": path, "code": code, "message": message}]}


class ApiError(Exception):
    def __init__(self, status: int, path: str, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.body = _defect_body(path, code, message)


def parse_table_query(query: str) -> BenchmarkFilter:
    """Translate the table endpoint's query string into a BenchmarkFilter."""
    pairs = parse_qsl(query, keep_blank_values=True)
    seen: dict[str, str] = {}
    for key, value in pairs:
        if key not in TABLE_PARAMS:
            raise ApiError(400, f"query.{key}", "unknown_param", f"unknown query parameter {key!r}")
        if key in seen:
            raise ApiError(400, f"query.{key}", "duplicate_param", f"query parameter {key!r} given twice")
        seen[key] = value

    def as_set(key: str) -> frozenset[str] | None:
        raw = seen.get(key, "")
        values = [v for v in raw.split(",") if v]
        return frozenset(values) if values else None

    min_zero_shot = None
    if seen.get("min_zero_shot"):
        try:
            min_zero_shot = float(seen["min_zero_shot"])
        except ValueError:
            raise ApiError(400, "query.min_zero_shot", "bad_param", "min_zero_shot must be a number") from None
        if not 0.0 <= min_zero_shot <= 1.0:
            raise ApiError(400, "query.min_zero_shot", "bad_param", "min_zero_shot must be within [0, 1]")
    include_unknown = True
    if seen.get("include_unknown"):
        flag = seen["include_unknown"].lower()
        if flag not in ("true", "false"):
            raise ApiError(400, "query.include_unknown", "bad_param", "include_unknown must be true or false")
        include_unknown = flag == "true"
    return BenchmarkFilter(
        task_types=as_set("task_types"),
        languages=as_set("languages"),
        domains=as_set("domains"),
        min_zero_shot=min_zero_shot,
        include_unknown_zero_shot=include_unknown,
    )


class ApiState:
    """Shared immutable registry plus a periodically refreshed results scan."""

    def __init__(self, registry: Registry, results_root: Path, refresh_s: float = 60.0):
        self.registry = registry
        self.results_root = Path(results_root)
        self.refresh_s = refresh_s
        self._lock = threading.Lock()
        self._scan: ScanResult | None = None
        self._scanned_at = 0.0
        self._coverage: dict | None = None

    def scan(self) -> ScanResult:
        with self._lock:
            now = time.monotonic()
            if self._scan is None or now - self._scanned_at > self.refresh_s:
                self._scan = scan_results_repo(self.results_root, self.registry)
                self._scanned_at = now
            return self._scan

    def coverage(self) -> dict:
        with self._lock:
            if self._coverage is None:
                self._coverage = coverage_report(self.registry)
            return self._coverage


def _route(state: ApiState, path: str, query: str) -> dict | list:
    segments = [unquote(s) for s in path.split("/") if s]
    if segments == ["api", "benchmarks"]:
        if query:
            raise ApiError(400, "query", "unknown_param", "this endpoint takes no query parameters")
        registry = state.registry
        return [
            {
                "name": bench.name,
                "display_name": bench.display_name,
                "version": bench.version,
                "task_count": len(bench.task_names),
            }
            for bench in (registry.benchmarks[name] for name in sorted(registry.benchmarks))
        ]
    if len(segments) == 4 and segments[:2] == ["api", "benchmarks"] and segments[3] == "table":
        filt = parse_table_query(query)
        try:
            table = aggregate_table(state.registry, state.scan(), segments[2], filt)
        except EmbenchError as exc:
            status = {"unknown_benchmark": 404, "empty_after_filter": 400}.get(exc.code, 500)
            raise ApiError(status, "benchmark", exc.code, str(exc.args[0])) from exc
        return table_to_obj(table)
    if len(segments) == 3 and segments[:2] == ["api", "models"]:
        if query:
            raise ApiError(400, "query", "unknown_param", "this endpoint takes no query parameters")
        wanted = segments[2]
        registry = state.registry
        matches = [name for name in registry.models if model_dir_name(name) == wanted]
        if not matches:
            raise ApiError(404, "model", "unknown_model", f"no model stored as {wanted!r}")
        model_name = matches[0]
        per_task = state.scan().by_model.get(model_name, {})
        return {
            "model": model_meta_to_obj(registry.models[model_name]),
            "results": {task: record_to_obj(record) for task, record in sorted(per_task.items())},
        }
    if segments == ["api", "coverage"]:
        if query:
            raise ApiError(400, "query", "unknown_param", "this endpoint takes no query parameters")
        return state.coverage()
    raise ApiError(404, "path", "not_found", f"no route for {path!r}")


class ApiHandler(BaseHTTPRequestHandler):
    state: ApiState
    verbose = False

    def _send(self, status: int, body: dict | list) -> None:
        payload = canonical_bytes(body)
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(payload)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()
        self.wfile.write(payload)

    def do_GET(self) -> None:  # noqa: N802 (http.server API)
        split = urlsplit(self.path)
        try:
            body = _route(self.state, split.path, split.query)
        except ApiError as exc:
            self._send(exc.status, exc.body)
            return
        except EmbenchError as exc:
            self._send(500, _defect_body("", exc.code, str(exc.args[0])))
            return
        self._send(200, body)

    def do_OPTIONS(self) -> None:  # noqa: N802 (http.server API)
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()

    def log_message(self, format: str, *args) -> None:
        if self.verbose:
            super().log_message(format, *args)


def create_server(
    registry_root: Path,
    results_root: Path,
    host: str = "127.0.0.1",
    port: int = 0,
    refresh_s: float = 60.0,
    verbose: bool = False,
) -> ThreadingHTTPServer:
    """Build a ready-to-serve HTTP server; port 0 picks a free port."""
    state = ApiState(load_registry(registry_root), results_root, refresh_s=refresh_s)
    handler = type("BoundApiHandler", (ApiHandler,), {"state": state, "verbose": verbose})
    return ThreadingHTTPServer((host, port), handler)


def serve(
    registry_root: Path,
    results_root: Path,
    host: str = "127.0.0.1",
    port: int = 8076,
    refresh_s: float = 60.0,
    verbose: bool = True,
) -> None:
    server = create_server(registry_root, results_root, host, port, refresh_s, verbose)
    address = server.socket.getsockname()
    print(f"serving registry API on http://{address[0]}:{address[1]}")
    try:
        server.serve_forever()
    finally:
        server.server_close()
