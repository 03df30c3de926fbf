"""Shared fixtures: a fully built demo tree (registry + datasets + results)
reused session-wide, plus a terminal summary mapping acceptance tests to
one PASS/FAIL line each."""

from __future__ import annotations

from pathlib import Path

import pytest

from embench.cli import RunConfig, run_benchmark
from embench.mocks import DEMO_BENCHMARK, DEMO_MODELS, build_demo_registry
from embench.registry import Registry, load_registry


@pytest.fixture(scope="session")
def demo_tree(tmp_path_factory) -> tuple[Path, Path]:
    """Registry with datasets plus results for both demo models. Tests must
    not mutate this tree; copy it first."""
    root = tmp_path_factory.mktemp("demo")
    registry_root = root / "registry"
    results_root = root / "results"
    build_demo_registry(registry_root)
    for model_name in DEMO_MODELS:
        cfg = RunConfig(registry_root=registry_root, results_root=results_root,
                        model_name=model_name, benchmark=DEMO_BENCHMARK)
        _, failures = run_benchmark(cfg)
        assert not failures, failures
    return registry_root, results_root


@pytest.fixture(scope="session")
def registry_root(demo_tree) -> Path:
    return demo_tree[0]


@pytest.fixture(scope="session")
def results_root(demo_tree) -> Path:
    return demo_tree[1]


@pytest.fixture(scope="session")
def registry(registry_root) -> Registry:
    return load_registry(registry_root)


CRITERIA = (
    ("c01", "zero-shot formula: 1/20 -> 0.95, boundaries exact, < 1 s"),
    ("c02", "initial-policy filter keeps exactly {z=1.0, unknown} rows"),
    ("c03", "run twice + jobs 1 vs 4: byte-identical excluding started_at"),
    ("c04", "borda matches brute-force oracle on 200 instances + A/B/C"),
    ("c05", "ndcg/map/spearman/v-measure match independent oracles"),
    ("c06", "borda invariant under strictly increasing transforms"),
    ("c07", "six prompt/behavior scenarios incl. stage_missing"),
    ("c08", "normalized embedders: 1000 texts, all norms within 1e-6"),
    ("c09", "10-defect tree -> exactly 10 defects; clean tree -> 0; exits"),
    ("c10", "results stamped with versions; major-0 record excluded"),
    ("c11", "any single-byte dataset mutation -> revision_mismatch"),
    ("c12", "emissions: 7200 s x 300 W x 0.4 -> 0.24 kg exactly"),
)

_outcomes: dict[str, str] = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_c") or "test_acceptance" not in report.nodeid:
        return
    key = name.split("_")[1]
    if report.when == "call":
        _outcomes[key] = report.outcome
    elif report.when == "setup" and report.outcome != "passed":
        _outcomes[key] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for key, title in CRITERIA:
        outcome = _outcomes.get(key, "not run")
        word = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}.get(outcome, "NOT RUN")
        terminalreporter.write_line(f"{word}  {key}  {title}")
