"""Command-line surface: exit codes, env-var defaults, output routing."""

from __future__ import annotations

import json
import shutil

import pytest

from embench import __version__
from embench.cli import main, run_benchmark, validate_tree, RunConfig
from embench.datasets import canonical_hash
from embench.leaderboard import BenchmarkFilter, aggregate_table, render_markdown_table
from embench.mocks import build_demo_registry
from embench.results import read_result, scan_results_repo


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_usage_errors_exit_2(registry_root, tmp_path, monkeypatch):
    monkeypatch.delenv("EMBENCH_REGISTRY", raising=False)
    monkeypatch.delenv("EMBENCH_RESULTS", raising=False)
    cases = [
        ["definitely-not-a-command"],
        # --model missing
        ["run", "--registry", str(registry_root), "--results", str(tmp_path),
         "--benchmark", "mock-suite"],
        # neither --benchmark nor --tasks
        ["run", "--registry", str(registry_root), "--results", str(tmp_path),
         "--model", "mock/trigram"],
        # both --benchmark and --tasks
        ["run", "--registry", str(registry_root), "--results", str(tmp_path),
         "--model", "mock/trigram", "--benchmark", "mock-suite", "--tasks", "mock-sts"],
        # registry neither flagged nor in the environment
        ["validate"],
    ]
    for argv in cases:
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2, argv


def test_run_unknown_model_fails_without_writing(registry_root, tmp_path, capsys):
    code = main(["run", "--registry", str(registry_root), "--results", str(tmp_path),
                 "--model", "ghost/model", "--benchmark", "mock-suite"])
    assert code == 1
    assert "unknown_model" in capsys.readouterr().err
    assert not list(tmp_path.rglob("*.json"))


def test_run_task_subset_writes_only_those(registry_root, tmp_path, capsys):
    code = main(["run", "--registry", str(registry_root), "--results", str(tmp_path),
                 "--model", "mock/trigram", "--tasks", "mock-sts,mock-retrieval"])
    assert code == 0
    written = sorted(p.name for p in tmp_path.rglob("*.json"))
    assert written == ["mock-retrieval.json", "mock-sts.json"]
    out = capsys.readouterr().out
    assert out.count("ok ") == 2 and "main_score=" in out


def test_run_emissions_flags_reach_records(registry_root, tmp_path):
    code = main(["run", "--registry", str(registry_root), "--results", str(tmp_path),
                 "--model", "mock/trigram", "--tasks", "mock-sts",
                 "--power-w", "300", "--intensity", "0.4"])
    assert code == 0
    record = read_result(next(tmp_path.rglob("mock-sts.json")))
    expected = record.evaluation_time_s / 3600 * 0.3 * 0.4
    assert record.kg_co2_emissions == pytest.approx(expected)


def test_env_vars_supply_roots(registry_root, results_root, tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("EMBENCH_REGISTRY", str(registry_root))
    monkeypatch.setenv("EMBENCH_RESULTS", str(results_root))
    assert main(["validate"]) == 0
    assert "0 defect(s)" in capsys.readouterr().out


def test_validate_clean_tree_exits_0(registry_root, results_root, capsys):
    code = main(["validate", "--registry", str(registry_root),
                 "--results", str(results_root)])
    assert code == 0


def test_validate_reports_defects_and_exits_1(registry_root, results_root,
                                              tmp_path, capsys):
    registry_copy = tmp_path / "registry"
    shutil.copytree(registry_root, registry_copy)
    victim = registry_copy / "datasets" / "mock-sts" / "test.jsonl"
    raw = bytearray(victim.read_bytes())
    raw[0] ^= 0x01
    victim.write_bytes(bytes(raw))
    code = main(["validate", "--registry", str(registry_copy)])
    assert code == 1
    out = capsys.readouterr().out
    assert "revision_mismatch" in out and "1 defect(s)" in out


def test_table_command_matches_library(registry_root, results_root, registry, capsys):
    code = main(["table", "--registry", str(registry_root),
                 "--results", str(results_root), "--benchmark", "mock-suite"])
    assert code == 0
    scan = scan_results_repo(results_root, registry)
    expected = render_markdown_table(aggregate_table(registry, scan, "mock-suite"))
    assert capsys.readouterr().out == expected


def test_table_command_filter_flags(registry_root, results_root, registry, capsys):
    code = main(["table", "--registry", str(registry_root),
                 "--results", str(results_root), "--benchmark", "mock-suite",
                 "--task-types", "retrieval,sts", "--min-zero-shot", "0.5"])
    assert code == 0
    scan = scan_results_repo(results_root, registry)
    expected = render_markdown_table(aggregate_table(
        registry, scan, "mock-suite",
        BenchmarkFilter(task_types=frozenset({"retrieval", "sts"}), min_zero_shot=0.5)))
    assert capsys.readouterr().out == expected


def test_table_unknown_benchmark_exits_1(registry_root, results_root, capsys):
    code = main(["table", "--registry", str(registry_root),
                 "--results", str(results_root), "--benchmark", "ghost"])
    assert code == 1
    assert "unknown_benchmark" in capsys.readouterr().err


def test_scatter_command_emits_csv(registry_root, results_root, capsys):
    code = main(["scatter", "--registry", str(registry_root),
                 "--results", str(results_root), "--benchmark", "mock-suite"])
    assert code == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "model,mean_score,zero_shot,n_parameters"
    assert "mock/seeded-norm" in out


def test_coverage_command_prints_json(registry_root, capsys):
    code = main(["coverage", "--registry", str(registry_root)])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert sorted(report["tasks"]) == [
        "mock-classification", "mock-clustering", "mock-retrieval", "mock-sts"]


def test_hash_command_prints_revision(registry_root, capsys):
    target = registry_root / "datasets" / "mock-sts"
    code = main(["hash", str(target)])
    assert code == 0
    assert capsys.readouterr().out.strip() == canonical_hash(target).revision


def test_invalid_registry_metadata_exits_1(tmp_path, capsys):
    build_demo_registry(tmp_path)
    victim = tmp_path / "models" / "mock" / "trigram.json"
    obj = json.loads(victim.read_text())
    del obj["license"]
    victim.write_text(json.dumps(obj), encoding="utf-8")
    code = main(["table", "--registry", str(tmp_path), "--results", str(tmp_path),
                 "--benchmark", "mock-suite"])
    assert code == 1
    assert "missing_field" in capsys.readouterr().err


def test_run_benchmark_collects_failures_per_task(registry_root, tmp_path):
    registry_copy = tmp_path / "registry"
    shutil.copytree(registry_root, registry_copy)
    victim = registry_copy / "datasets" / "mock-clustering" / "test.jsonl"
    raw = bytearray(victim.read_bytes())
    raw[0] ^= 0x01
    victim.write_bytes(bytes(raw))
    cfg = RunConfig(registry_root=registry_copy, results_root=tmp_path / "results",
                    model_name="mock/trigram", benchmark="mock-suite")
    outcomes, failures = run_benchmark(cfg)
    assert len(outcomes) == 3
    assert [f.task_name for f in failures] == ["mock-clustering"]
    assert failures[0].code == "revision_mismatch"


def test_validate_tree_flags_cross_references(registry_root, results_root, tmp_path):
    results_copy = tmp_path / "results"
    shutil.copytree(results_root, results_copy)
    orphan_dir = results_copy / "ghost__model" / "r1"
    source = next(results_copy.rglob("mock-sts.json"))
    obj = json.loads(source.read_text())
    obj["model_name"] = "ghost/model"
    orphan_dir.mkdir(parents=True)
    (orphan_dir / "mock-sts.json").write_text(json.dumps(obj), encoding="utf-8")
    defects = validate_tree(registry_root, results_copy)
    assert [d.code for d in defects] == ["dangling_model_reference"]
