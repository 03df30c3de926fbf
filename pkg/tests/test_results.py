"""Canonical serialization, result records, atomic writes, repo scanning."""

from __future__ import annotations

import json
import os
import signal
import subprocess
import sys
import textwrap
from dataclasses import replace

import pytest

from embench.canonical import atomic_write_bytes, canonical_bytes, canonical_dumps
from embench.errors import EmbenchError
from embench.evaluators import TaskScores
from embench.results import (
    estimate_emissions,
    model_dir_name,
    now_timestamp,
    parse_result_obj,
    parse_timestamp,
    read_result,
    record_to_obj,
    result_path,
    scan_results_repo,
    validate_result,
    write_result,
)
from support import make_result, make_task


# --- canonical JSON ---

def test_canonical_output_is_key_order_independent():
    assert canonical_bytes({"b": 1, "a": {"y": 2, "x": 3}}) == \
        canonical_bytes({"a": {"x": 3, "y": 2}, "b": 1})


def test_canonical_format_details():
    data = canonical_bytes({"pi": 0.1, "text": "héllo"})
    assert data == b'{"pi":0.1,"text":"h\xc3\xa9llo"}\n'
    assert canonical_dumps(1e-07) == "1e-07"


def test_canonical_rejects_nan():
    with pytest.raises(ValueError):
        canonical_dumps(float("nan"))


# --- record round trip ---

def demo_record(**overrides):
    task = make_task("trip-task", "sts")
    record = make_result("org/model", task, 0.5)
    return replace(record, **overrides) if overrides else record


def test_record_round_trip_is_stable(tmp_path):
    record = demo_record()
    path = write_result(tmp_path, record)
    assert path == result_path(tmp_path, record)
    assert path.name == "trip-task.json"
    assert path.parent.name == "r1"
    assert path.parent.parent.name == "org__model"
    loaded = read_result(path)
    assert loaded == record
    first = path.read_bytes()
    write_result(tmp_path, loaded)
    assert path.read_bytes() == first


def test_model_dir_name_replaces_slash():
    assert model_dir_name("org/model") == "org__model"


def test_optional_emissions_field_round_trips(tmp_path):
    record = demo_record(kg_co2_emissions=0.125)
    obj = record_to_obj(record)
    assert obj["kg_co2_emissions"] == 0.125
    assert "kg_co2_emissions" not in record_to_obj(demo_record())
    parsed, defects = parse_result_obj(obj)
    assert not defects and parsed == record


def test_invalid_records_rejected_before_write(tmp_path):
    bad = [
        demo_record(framework_version="abc"),
        demo_record(evaluation_time_s=-1.0),
        demo_record(started_at="yesterday"),
        demo_record(model_revision="has/slash"),
        demo_record(task_revision="tooshort"),
        demo_record(scores=TaskScores("trip-task", {"test": {"spearman": 2.0}}, 2.0)),
        demo_record(scores=TaskScores("other-name", {"test": {"spearman": 0.0}}, 0.0)),
        demo_record(scores=TaskScores("trip-task", {"test": {"bogus": 0.0}}, 0.0)),
    ]
    expected = ["bad_semver", "negative_value", "bad_timestamp", "bad_revision",
                "bad_revision", "score_out_of_range", "name_mismatch", "unknown_metric"]
    for record, code in zip(bad, expected):
        codes = [d.code for d in validate_result(record)]
        assert code in codes, (code, codes)
        with pytest.raises(EmbenchError) as err:
            write_result(tmp_path, record)
        assert err.value.code == "invalid_record"
        assert not any(tmp_path.rglob("*.json"))


def test_read_rejects_truncated_and_unknown_key_files(tmp_path):
    path = write_result(tmp_path, demo_record())
    path.write_bytes(path.read_bytes()[:-10])
    with pytest.raises(EmbenchError) as err:
        read_result(path)
    assert err.value.code == "format_error"

    obj = record_to_obj(demo_record())
    obj["extra"] = 1
    path.write_text(canonical_dumps(obj), encoding="utf-8")
    with pytest.raises(EmbenchError) as err:
        read_result(path)
    assert err.value.code == "invalid_record"


def test_timestamps_round_trip():
    stamp = now_timestamp()
    assert stamp.endswith("Z")
    parse_timestamp(stamp)
    with pytest.raises(EmbenchError) as err:
        parse_timestamp("2026-08-22 10:00:00")
    assert err.value.code == "bad_timestamp"


# --- atomicity under a crash ---

CRASH_CHILD = textwrap.dedent("""
    import os, sys
    from embench.canonical import atomic_write_bytes

    target = sys.argv[1]
    real_fsync = os.fsync
    def stalling_fsync(fd):
        real_fsync(fd)
        print("mid-write", flush=True)
        import time; time.sleep(60)
    os.fsync = stalling_fsync
    atomic_write_bytes(target, b"REPLACEMENT" * 65536)
""")


def test_crash_between_write_and_replace_leaves_target_intact(tmp_path):
    target = tmp_path / "record.json"
    original = b'{"state":"before"}\n'
    atomic_write_bytes(target, original)

    child = subprocess.Popen([sys.executable, "-c", CRASH_CHILD, str(target)],
                             stdout=subprocess.PIPE)
    assert child.stdout.readline().strip() == b"mid-write"
    os.kill(child.pid, signal.SIGKILL)
    child.wait()
    assert target.read_bytes() == original


def test_atomic_write_creates_parents(tmp_path):
    target = tmp_path / "deep" / "er" / "file.json"
    atomic_write_bytes(target, b"x\n")
    assert target.read_bytes() == b"x\n"


# --- scanning ---

def test_scan_indexes_newest_record_per_model_task(registry, tmp_path):
    task = registry.tasks["mock-sts"]
    old = make_result("mock/seeded-norm", task, 0.1, model_revision="r1",
                      started_at="2026-01-01T00:00:00.000000Z")
    new = make_result("mock/seeded-norm", task, 0.9, model_revision="r2",
                      started_at="2026-06-01T00:00:00.000000Z")
    write_result(tmp_path, old)
    write_result(tmp_path, new)
    scan = scan_results_repo(tmp_path, registry)
    assert scan.excluded == []
    chosen = scan.by_model["mock/seeded-norm"]["mock-sts"]
    assert chosen.model_revision == "r2" and chosen.scores.main_score == 0.9


def test_scan_breaks_timestamp_ties_by_revision(registry, tmp_path):
    task = registry.tasks["mock-sts"]
    stamp = "2026-06-01T00:00:00.000000Z"
    for rev, score in (("aaa", 0.2), ("zzz", 0.8)):
        write_result(tmp_path, make_result("mock/seeded-norm", task, score,
                                           model_revision=rev, started_at=stamp))
    scan = scan_results_repo(tmp_path, registry)
    assert scan.by_model["mock/seeded-norm"]["mock-sts"].model_revision == "zzz"


def test_scan_excludes_other_major_versions(registry, tmp_path):
    task = registry.tasks["mock-sts"]
    write_result(tmp_path, make_result("mock/seeded-norm", task, 0.5))
    write_result(tmp_path, make_result("mock/seeded-norm", task, 0.99,
                                       model_revision="r9", framework="0.9.0",
                                       started_at="2099-01-01T00:00:00.000000Z"))
    scan = scan_results_repo(tmp_path, registry)
    assert scan.by_model["mock/seeded-norm"]["mock-sts"].framework_version != "0.9.0"
    assert len(scan.excluded) == 1
    path, reason = scan.excluded[0]
    assert "r9" in path and "incompatible_version" in reason


def test_scan_reports_unreadable_files(registry, tmp_path):
    bad = tmp_path / "org__m" / "r1" / "task.json"
    bad.parent.mkdir(parents=True)
    bad.write_text("{truncated", encoding="utf-8")
    scan = scan_results_repo(tmp_path, registry)
    assert scan.by_model == {}
    assert len(scan.excluded) == 1


def test_scan_of_demo_tree(registry, results_root):
    scan = scan_results_repo(results_root, registry)
    assert sorted(scan.by_model) == ["mock/seeded-norm", "mock/trigram"]
    for tasks in scan.by_model.values():
        assert sorted(tasks) == ["mock-classification", "mock-clustering",
                                 "mock-retrieval", "mock-sts"]
    assert scan.excluded == []


# --- emissions ---

def test_emissions_formula_and_guards():
    assert estimate_emissions(3600, 1000, 1.0) == 1.0
    assert estimate_emissions(0, 500, 0.5) == 0.0
    with pytest.raises(EmbenchError) as err:
        estimate_emissions(-1, 1, 1)
    assert err.value.code == "negative_input"
