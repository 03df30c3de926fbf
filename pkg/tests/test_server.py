"""HTTP API surface: routing, query parsing, canonical bodies, CORS."""

from __future__ import annotations

import json
import threading
import urllib.error
import urllib.request

import pytest

from embench.canonical import canonical_bytes
from embench.leaderboard import BenchmarkFilter, aggregate_table, coverage_report, table_to_obj
from embench.metadata import model_meta_to_obj
from embench.results import scan_results_repo
from embench.server import ApiError, create_server, parse_table_query


@pytest.fixture(scope="module")
def api(demo_tree):
    registry_root, results_root = demo_tree
    server = create_server(registry_root, results_root)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    base = f"http://127.0.0.1:{server.server_address[1]}"
    try:
        yield base
    finally:
        server.shutdown()
        server.server_close()


def fetch(base: str, path: str):
    try:
        with urllib.request.urlopen(base + path, timeout=10) as response:
            return response.status, response.read(), dict(response.headers)
    except urllib.error.HTTPError as err:
        return err.code, err.read(), dict(err.headers)


# --- query parsing ---

def test_parse_table_query_defaults():
    filt = parse_table_query("")
    assert filt == BenchmarkFilter()


def test_parse_table_query_full():
    filt = parse_table_query(
        "task_types=retrieval,sts&languages=eng-Latn&domains=news,travel"
        "&min_zero_shot=0.5&include_unknown=false")
    assert filt.task_types == frozenset({"retrieval", "sts"})
    assert filt.languages == frozenset({"eng-Latn"})
    assert filt.domains == frozenset({"news", "travel"})
    assert filt.min_zero_shot == 0.5
    assert filt.include_unknown_zero_shot is False


def test_parse_table_query_rejections():
    for query, code in (
        ("sort=mean", "unknown_param"),
        ("task_types=a&task_types=b", "duplicate_param"),
        ("min_zero_shot=high", "bad_param"),
        ("min_zero_shot=1.5", "bad_param"),
        ("include_unknown=maybe", "bad_param"),
    ):
        with pytest.raises(ApiError) as err:
            parse_table_query(query)
        assert err.value.status == 400, query
        assert err.value.body["defects"][0]["code"] == code, query


def test_parse_table_query_blank_value_means_unconstrained():
    assert parse_table_query("task_types=").task_types is None


# --- endpoints ---

def test_benchmarks_endpoint_lists_suites(api):
    status, body, headers = fetch(api, "/api/benchmarks")
    assert status == 200
    listing = json.loads(body)
    assert [b["name"] for b in listing] == ["mock-suite"]
    assert listing[0]["task_count"] == 4
    assert listing[0]["version"] == "1.0.0"
    assert headers["Access-Control-Allow-Origin"] == "*"
    assert body.endswith(b"\n")


def test_table_endpoint_equals_library_output(api, demo_tree, registry):
    registry_root, results_root = demo_tree
    scan = scan_results_repo(results_root, registry)
    expected = canonical_bytes(table_to_obj(aggregate_table(registry, scan, "mock-suite")))
    status, body, _ = fetch(api, "/api/benchmarks/mock-suite/table")
    assert status == 200
    assert body == expected


def test_table_endpoint_applies_filters(api, demo_tree, registry):
    registry_root, results_root = demo_tree
    scan = scan_results_repo(results_root, registry)
    expected = canonical_bytes(table_to_obj(aggregate_table(
        registry, scan, "mock-suite",
        BenchmarkFilter(task_types=frozenset({"retrieval", "sts"})))))
    status, body, _ = fetch(api, "/api/benchmarks/mock-suite/table?task_types=retrieval,sts")
    assert status == 200
    assert body == expected


def test_table_unknown_benchmark_404(api):
    status, body, _ = fetch(api, "/api/benchmarks/ghost/table")
    assert status == 404
    obj = json.loads(body)
    assert obj["defects"][0]["code"] == "unknown_benchmark"


def test_table_unknown_param_400(api):
    status, body, headers = fetch(api, "/api/benchmarks/mock-suite/table?sort=mean")
    assert status == 400
    obj = json.loads(body)
    assert obj["defects"][0]["code"] == "unknown_param"
    assert headers["Access-Control-Allow-Origin"] == "*"


def test_table_empty_after_filter_400(api):
    status, body, _ = fetch(
        api, "/api/benchmarks/mock-suite/table?min_zero_shot=1.0&include_unknown=false")
    assert status == 400
    assert json.loads(body)["defects"][0]["code"] == "empty_after_filter"


def test_model_endpoint_returns_meta_and_results(api, registry):
    status, body, _ = fetch(api, "/api/models/mock__seeded-norm")
    assert status == 200
    obj = json.loads(body)
    assert obj["model"] == model_meta_to_obj(registry.models["mock/seeded-norm"])
    assert sorted(obj["results"]) == [
        "mock-classification", "mock-clustering", "mock-retrieval", "mock-sts"]
    for record in obj["results"].values():
        assert record["framework_version"] == registry.framework_version


def test_model_endpoint_unknown_404(api):
    status, body, _ = fetch(api, "/api/models/ghost__model")
    assert status == 404
    assert json.loads(body)["defects"][0]["code"] == "unknown_model"


def test_coverage_endpoint_equals_library_output(api, registry):
    status, body, _ = fetch(api, "/api/coverage")
    assert status == 200
    assert body == canonical_bytes(coverage_report(registry))


def test_unknown_route_404(api):
    status, body, _ = fetch(api, "/api/nope")
    assert status == 404
    assert json.loads(body)["defects"][0]["code"] == "not_found"


def test_non_table_endpoint_rejects_query(api):
    status, body, _ = fetch(api, "/api/benchmarks?page=2")
    assert status == 400
    assert json.loads(body)["defects"][0]["code"] == "unknown_param"


def test_options_preflight(api):
    request = urllib.request.Request(api + "/api/benchmarks", method="OPTIONS")
    with urllib.request.urlopen(request, timeout=10) as response:
        assert response.status == 204
        assert response.headers["Access-Control-Allow-Origin"] == "*"
        assert "GET" in response.headers["Access-Control-Allow-Methods"]
