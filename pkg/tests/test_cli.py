from __future__ import annotations

import json
import subprocess
import sys

import pytest

from conftest import FIXTURES


def run_cli(*args, stdin: str | None = None):
    return subprocess.run(
        [sys.executable, "-m", "noesis.cli", *args],
        input=stdin,
        capture_output=True,
        text=True,
        timeout=60,
    )


def test_help_exits_zero():
    result = run_cli("--help")
    assert result.returncode == 0
    for command in ("scale", "lattice", "replay", "explore", "serve"):
        assert command in result.stdout


def test_scale_digits_matches_fixture(tmp_path):
    out = tmp_path / "ctx.json"
    result = run_cli("scale", str(FIXTURES / "digits_scenario.json"), "-o", str(out))
    assert result.returncode == 0
    assert out.read_bytes() == (FIXTURES / "digits_context.json").read_bytes()


def test_scale_apple_to_stdout():
    result = run_cli("scale", str(FIXTURES / "apple_scenario.json"))
    assert result.returncode == 0
    doc = json.loads(result.stdout)
    assert doc["incidence"] == [[1, 0, 1, 0]]


def test_scale_missing_file_exits_2():
    assert run_cli("scale", "no-such-file.json").returncode == 2


def test_scale_invalid_scenario_exits_3(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "perspectives": [{"name": "taste", "propositions": ["sweet"]}],
        "timeline": [{"granule": 0, "instance": "apple", "truth": {}}],
    }))
    result = run_cli("scale", str(bad))
    assert result.returncode == 3
    assert "MissingTruth" in result.stderr


def test_lattice_prints_concept_count(tmp_path):
    result = run_cli("lattice", str(FIXTURES / "digits_context.json"))
    assert result.returncode == 0
    assert result.stdout.strip() == "14 concepts"


def test_lattice_empty_context(tmp_path):
    empty = tmp_path / "empty.json"
    empty.write_text(json.dumps({
        "dimensions": [{"name": "d", "attributes": ["x"]}],
        "objects": [], "incidence": [], "granules": {},
    }))
    result = run_cli("lattice", str(empty))
    assert result.stdout.strip() == "1 concepts"


def test_lattice_writes_both_exports(tmp_path):
    dot, js = tmp_path / "l.dot", tmp_path / "l.json"
    result = run_cli(
        "lattice", str(FIXTURES / "digits_context.json"), "--dot", str(dot), "--json", str(js)
    )
    assert result.returncode == 0
    assert dot.read_text().startswith("digraph lattice {")
    assert len(json.loads(js.read_bytes())["concepts"]) == 14


def test_lattice_reads_burmeister(tmp_path):
    cxt = tmp_path / "two.cxt"
    cxt.write_text("B\n\n1\n2\n\ng\nx\ny\nX.\n")
    result = run_cli("lattice", str(cxt))
    assert result.stdout.strip() == "2 concepts"


def test_replay_digits_summary_and_trace(tmp_path):
    trace = tmp_path / "trace.jsonl"
    result = run_cli(
        "replay",
        "--reference", str(FIXTURES / "digits_context.json"),
        "--script", str(FIXTURES / "digits_script.json"),
        "--trace", str(trace),
    )
    assert result.returncode == 0
    assert "conscious: true" in result.stdout
    lines = [json.loads(line) for line in trace.read_text().splitlines()]
    supporting = [
        (doc["oracle_answer"] or {}).get("counterexample", {}).get("name")
        for doc in lines
        if doc["measurement_cue"] is not None and doc["learning_cue"] is None
    ]
    assert supporting == ["One", "Two", "Four", "Three", None, None, "Six", None, "Nine", None]


def test_replay_twice_is_byte_identical(tmp_path):
    traces = []
    for name in ("a.jsonl", "b.jsonl"):
        path = tmp_path / name
        run_cli(
            "replay",
            "--reference", str(FIXTURES / "digits_context.json"),
            "--script", str(FIXTURES / "digits_script.json"),
            "--trace", str(path),
        )
        traces.append(path.read_bytes())
    assert traces[0] == traces[1]


def test_replay_writes_snapshots(tmp_path):
    snapdir = tmp_path / "snaps"
    result = run_cli(
        "replay",
        "--reference", str(FIXTURES / "digits_context.json"),
        "--script", str(FIXTURES / "digits_script.json"),
        "--snapshots", str(snapdir),
    )
    assert result.returncode == 0
    assert (snapdir / "lattice_000.json").exists()
    assert (snapdir / "ensemble_009.json").exists()
    final = json.loads((snapdir / "lattice_009.json").read_bytes())
    assert len(final["concepts"]) == 14


def test_replay_empty_script(tmp_path):
    script = tmp_path / "empty.json"
    script.write_text("[]")
    trace = tmp_path / "trace.jsonl"
    result = run_cli(
        "replay",
        "--reference", str(FIXTURES / "digits_context.json"),
        "--script", str(script),
        "--trace", str(trace),
    )
    assert result.returncode == 0
    assert len(trace.read_text().splitlines()) == 1


def test_replay_unknown_attribute_exits_4(tmp_path):
    script = tmp_path / "bad.json"
    script.write_text(json.dumps([{"premise": ["Negative"], "conclusion": ["Even"]}]))
    result = run_cli(
        "replay",
        "--reference", str(FIXTURES / "digits_context.json"),
        "--script", str(script),
    )
    assert result.returncode == 4


def test_explore_quit_immediately(tmp_path):
    trace = tmp_path / "trace.jsonl"
    result = run_cli(
        "explore",
        "--context", str(FIXTURES / "digits_context.json"),
        "--trace", str(trace),
        stdin="quit\n",
    )
    assert result.returncode == 0
    assert "phase: terminal" in result.stdout
    lines = [json.loads(line) for line in trace.read_text().splitlines()]
    assert lines[-1]["resulting_phase"] == "terminal"


def test_explore_accept_and_reject_round(tmp_path):
    start = tmp_path / "start.json"
    start.write_text(json.dumps({
        "dimensions": [{"name": "types",
                        "attributes": ["Composite", "Even", "Odd", "Prime", "Square"]}],
        "objects": [], "incidence": [], "granules": {},
    }))
    trace = tmp_path / "trace.jsonl"
    stdin = "\n".join([
        "-> Odd",                    # custom cue: {} -> {Odd}; vacuous, so the oracle is asked
        "reject Two: Even, Prime",   # reject with digit 2 as the supporting cue
        "Even -> Prime",             # now holds locally ({Two} bears Prime)
        "accept",
        "quit",
    ]) + "\n"
    result = run_cli("explore", "--context", str(start), "--trace", str(trace), stdin=stdin)
    assert result.returncode == 0
    assert "learnt Two at granule 1" in result.stdout
    # the accepted cue belongs to the same granule row as the learning component
    assert "conscious at granule 1" in result.stdout


def test_serve_rejects_bad_address():
    result = run_cli("serve", "--addr", "nonsense")
    assert result.returncode == 2
