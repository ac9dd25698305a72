import json
import subprocess
import sys
from pathlib import Path

import pytest

from stoptime.cli import main

FIX = Path(__file__).parent / "fixtures"


def run(tmp_path, *argv):
    out = tmp_path / "out.jsonl"
    code = main([*map(str, argv), "--out", str(out)])
    recs = [json.loads(ln) for ln in out.read_text().splitlines()] if out.exists() else []
    return code, recs


def test_color_game_rank_episodes(tmp_path):
    code, recs = run(tmp_path, "color-game", "--strategy", "rank", "--k", 4, "--depth", 12,
                     "--episodes", 100, "--seed", 1)
    assert code == 0 and len(recs) == 100 and all(r["ok"] for r in recs)
    assert all(r["colors_used"] <= 4 for r in recs)


def test_color_game_trace_moves(tmp_path):
    code, recs = run(tmp_path, "color-game", "--k", 2, "--alice", FIX / "script.txt", "--trace-moves")
    assert code == 0
    assert [r["vertex"] for r in recs[:-1]] == ["1", "00", "010"]


@pytest.mark.parametrize("argv", [
    ["color-game", "--k", "0"],
    ["color-game", "--k", "2", "--depth", "99"],
    ["color-game"],
    ["alloc-game", "--n", "3"],
    ["alloc-adversary", "--n", "2", "--assigner", "nobody"],
    ["alloc-adversary", "--n", "2", "--assigner", str(FIX / "malformed_assigner.jsonl")],
    ["beat-game", "--team", "wizard"],
    ["oracle", "--mode", str(FIX / "missing.tsv")],
    ["convert", "validate"],
    ["bogus"],
])
def test_config_errors_exit_2(tmp_path, argv):
    assert main(argv + ["--out", str(tmp_path / "o")]) == 2


def test_illegal_alice_exit_1(tmp_path):
    code, recs = run(tmp_path, "color-game", "--k", 2, "--alice", FIX / "illegal_alice.txt")
    assert code == 1 and recs[-1]["ok"] is False


def test_beat_game_transcript(tmp_path):
    code, recs = run(tmp_path, "beat-game", "--team", "replicator,sniper", "--depth", 16, "--seed", 5)
    assert code == 0
    assert recs[-1]["verdict"] == "won" and recs[-1]["ok"]
    assert {"round", "actor", "vertex", "label"} <= set(recs[0])


def test_beat_game_cheater_exit_1(tmp_path):
    code, recs = run(tmp_path, "beat-game", "--team", "cheater", "--depth", 8)
    assert code == 1 and recs[-1]["disqualified"] == [0]


def test_beat_game_too_shallow(tmp_path):
    code, recs = run(tmp_path, "beat-game", "--team", "silent,silent,silent", "--depth", 4)
    assert code == 1 and recs[-1]["verdict"] == "depth-exhausted"


def test_alloc_game_random(tmp_path):
    code, recs = run(tmp_path, "alloc-game", "--n", 4, "--streams", 5, "--seed", 2)
    assert code == 0 and len(recs) == 5
    assert all(r["highest_layer"] <= 5 and r["max_complexity"] <= 2 * 2 + 4 for r in recs)


def test_alloc_game_stream_files(tmp_path):
    code, recs = run(tmp_path, "alloc-game", "--n", 2, "--stream", FIX / "legal_stream.txt", "--trace-events")
    assert code == 0 and recs[0]["event"] == "declare" and recs[-1]["event"] == "summary"
    code, recs = run(tmp_path, "alloc-game", "--n", 2, "--stream", FIX / "over_budget_stream.txt")
    assert code == 1 and recs[-1]["event"] == "budget"


def test_alloc_adversary(tmp_path):
    code, recs = run(tmp_path, "alloc-adversary", "--n", 3, "--assigner", "greedy")
    assert code == 0 and recs[-1]["outcome"] in ("goal", "contradiction")
    code, recs = run(tmp_path, "alloc-adversary", "--n", 3, "--assigner", FIX / "conflicting_assigner.jsonl")
    assert code == 0 and recs[-1]["outcome"] == "contradiction"
    code, recs = run(tmp_path, "alloc-adversary", "--n", 2, "--c", 2)
    assert code == 1 and recs[-1]["outcome"] == "exhausted"


def test_convert_validate(tmp_path):
    assert run(tmp_path, "convert", "validate", FIX / "valid_mode.tsv")[0] == 0
    code, recs = run(tmp_path, "convert", "validate", FIX / "invalid_mode.tsv")
    assert code == 1 and "violation" in recs[0]


def test_convert_trim_keeps_first(tmp_path):
    result = tmp_path / "trimmed.tsv"
    code, recs = run(tmp_path, "convert", "trim", FIX / "conflicting_stream.tsv", "--result", result)
    assert code == 0 and recs[0]["dropped"] == [["0", "10", "00"]]
    assert "0\t1\t11" in result.read_text()


def test_convert_join_and_lengths(tmp_path):
    joined = tmp_path / "j.tsv"
    assert run(tmp_path, "convert", "join", FIX / "valid_mode.tsv", FIX / "valid_mode.tsv", "--result", joined)[0] == 0
    assert len([ln for ln in joined.read_text().splitlines() if not ln.startswith("#")]) == 6
    assert run(tmp_path, "convert", "join", FIX / "invalid_mode.tsv")[0] == 1
    lengths = tmp_path / "l.tsv"
    assert run(tmp_path, "convert", "to-length", FIX / "valid_mode.tsv", "--result", lengths)[0] == 0
    assert run(tmp_path, "convert", "from-length", lengths, "--result", tmp_path / "b.tsv")[0] == 0
    assert run(tmp_path, "convert", "to-length", FIX / "invalid_mode.tsv")[0] == 1
    code, recs = run(tmp_path, "convert", "families", FIX / "valid_mode.tsv")
    assert code == 0 and {r["description"] for r in recs} == {"", "0", "00"}


def test_convert_machines(tmp_path):
    script = tmp_path / "s.txt"
    code, recs = run(tmp_path, "convert", "machine-to-script", "--machine", "read", "--params", 2,
                     "--depth", 3, "--result", script)
    assert code == 0 and recs[0]["emitted"] == 4
    code, recs = run(tmp_path, "convert", "script-to-stopset", script, "--depth", 3)
    assert code == 0 and recs[0]["stops"] == 4
    code, recs = run(tmp_path, "convert", "script-to-stopset", FIX / "script.txt", "--depth", 4)
    assert code == 0 and recs[0]["ok"]
    code, _ = run(tmp_path, "convert", "script-to-stopset", FIX / "not_prefix_free_script.txt")
    assert code == 1
    assert run(tmp_path, "convert", "machine-to-script", "--machine", "teleport")[0] == 2


def test_oracle_command(tmp_path):
    code, recs = run(tmp_path, "oracle", "--mode", FIX / "valid_mode.tsv", "--brute", "--finite",
                     "--condition", "11")
    assert code == 0 and recs[-1]["cardinality"] == "ok"
    assert all(r["brute"] == r["value"] for r in recs[:-1])
    assert run(tmp_path, "oracle", "--mode", FIX / "invalid_mode.tsv")[0] == 1
    assert run(tmp_path, "oracle", "--mode", FIX / "valid_mode.tsv", "--horizon", 9)[0] == 2


def test_depth_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("STOPTIME_DEPTH_MAX", "8")
    assert run(tmp_path, "beat-game", "--depth", 12)[0] == 2
    monkeypatch.setenv("STOPTIME_DEPTH_MAX", "24")
    code, recs = run(tmp_path, "beat-game", "--team", "replicator,sniper,random,silent", "--depth", 24)
    assert code == 0 and recs[-1]["verdict"] == "won"
    monkeypatch.setenv("STOPTIME_DEPTH_MAX", "lots")
    assert main(["verify-all", "--quick"]) == 2


def test_same_seed_same_bytes(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    for path in (a, b):
        assert main(["color-game", "--k", "3", "--episodes", "20", "--seed", "9", "--trace-moves",
                     "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point_help():
    proc = subprocess.run([sys.executable, "-m", "stoptime", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    for name in ("color-game", "beat-game", "alloc-game", "alloc-adversary", "convert", "oracle", "verify-all"):
        assert name in proc.stdout
