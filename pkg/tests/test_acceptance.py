"""Acceptance criteria, each run at full size against its stated time limit.

Every test records one PASS/FAIL line; the lines are printed as they happen
(visible with ``-s``) and again in the terminal summary. Running this file
directly prints them without pytest.
"""

import time

import pytest

from stoptime import verify
from stoptime.cli import main

SEED = 20261016
RESULTS: dict[int, str] = {}


def _record(number, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} ({detail})"
    RESULTS[number] = line
    print(line)
    return ok


def _suite(number, title, suite, limit, **sizes):
    start = time.perf_counter()
    report = suite(SEED + number, **sizes)
    elapsed = time.perf_counter() - start
    ok = report.ok and elapsed < limit
    detail = f"{report.checked} checked, {elapsed:.1f}s of {limit}s"
    if report.failures:
        detail += f"; first failure: {report.failures[0]}"
    _record(number, title, ok, detail)
    return report, elapsed


def test_criterion_01_machine_round_trip():
    rep, t = _suite(1, "enumerator/machine round trip", verify.suite_machines, 30,
                    scripts=1000, machines=1000)
    assert rep.checked == 2000
    assert rep.ok, rep.failures
    assert t < 30


def test_criterion_02_online_coloring():
    rep, t = _suite(2, "online colouring, both strategies", verify.suite_coloring, 60, plays=1000)
    assert rep.checked == 2000 and all(m > 0 for m in rep.stats["moves"].values())
    assert rep.ok, rep.failures
    assert t < 60


def test_criterion_03_schedule_families():
    rep, t = _suite(3, "schedules to prefix-free families", verify.suite_schedules, 30, schedules=200)
    assert rep.checked == 200
    assert rep.ok, rep.failures
    assert t < 30


def test_criterion_04_oracle_half():
    rep, t = _suite(4, "oracle maximum bounded by monotone complexity", verify.suite_oracle, 60, modes=1000)
    assert rep.checked == 1000 and rep.stats["values_compared"] >= 1000
    assert rep.ok, rep.failures
    assert t < 60


def test_criterion_05_beating_game():
    rep, t = _suite(5, "builder beats every shipped team up to size 4", verify.suite_beating, 30, max_team=4)
    assert rep.checked == sum(4 ** i for i in range(5))
    assert rep.ok, rep.failures
    assert t < 30


def test_criterion_06_layered_allocator():
    rep, t = _suite(6, "layered allocator within n+2 layers", verify.suite_allocator, 120,
                    streams=500, ns=(1, 2, 4, 8), depth=16)
    assert rep.checked == 4 * 500
    assert all(top <= n + 1 for n, top in rep.stats["highest_layer"].items())
    assert rep.ok, rep.failures
    assert t < 120


def test_criterion_07_adversary():
    rep, t = _suite(7, "declaration adversary terminates within budget", verify.suite_adversary, 60)
    names = {key.split()[1] for key in rep.stats["outcomes"]}
    assert names == {"silent", "greedy", "random"}
    assert rep.ok, rep.failures
    assert t < 60


def test_criterion_08_minimal_in_class():
    rep, t = _suite(8, "minimal-in-class merge", verify.suite_minimal, 10, lists=200)
    assert rep.checked == 200
    assert rep.ok, rep.failures
    assert t < 10


def test_criterion_09_transformers():
    rep, t = _suite(9, "mode transformers", verify.suite_transformers, 30, modes=500)
    assert rep.checked == 500
    assert rep.ok, rep.failures
    assert t < 30


def test_criterion_10_determinism(tmp_path):
    paths = [tmp_path / "first.jsonl", tmp_path / "second.jsonl"]
    times, codes = [], []
    for path in paths:
        start = time.perf_counter()
        codes.append(main(["verify-all", "--seed", "7", "--quick", "--out", str(path)]))
        times.append(time.perf_counter() - start)
    same = paths[0].read_bytes() == paths[1].read_bytes()
    ok = same and codes == [0, 0] and max(times) < 10
    _record(10, "verify-all is byte-identical across runs", ok,
            f"exit codes {codes}, {max(times):.1f}s per run, identical={same}")
    assert codes == [0, 0]
    assert same
    assert max(times) < 10


if __name__ == "__main__":
    import sys
    import tempfile
    from pathlib import Path

    tests = [f for name, f in sorted(globals().items()) if name.startswith("test_criterion")]
    failed = 0
    for f in tests:
        try:
            if f is test_criterion_10_determinism:
                with tempfile.TemporaryDirectory() as d:
                    f(Path(d))
            else:
                f()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
