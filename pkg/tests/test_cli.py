"""Driver tests: exit codes, determinism, schema, no silent skips."""

import io
import json

import pytest

from btau.checks import CheckSpec, RunConfig, checks_for, run_suite
from btau.cli import build_parser, emit_json, main

FAST = ["--degree", "4", "--p-window", "4", "--param-order", "2", "--order", "12", "--trials", "3"]


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_exit_zero_on_pass(capsys):
    code, out = run_cli(["schur"] + FAST, capsys)
    assert code == 0
    assert "summary:" in out and "fail" in out


def test_exit_one_on_failure(capsys):
    # identity-1 is only stated for l >= 0: a negative sector is a real failure
    code, out = run_cli(["qdim", "--identity", "identity-1", "--l", "-1"] + FAST, capsys)
    assert code == 1
    assert "witness" in out or "FAIL" in out


def test_usage_error_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        build_parser().parse_args(["unknown-subcommand"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["borchardt", "--n", "25"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["schur", "--degree", "-3"])
    assert exc.value.code == 2


def test_json_schema_and_determinism(capsys):
    argv = ["qdim", "--json", "--order", "15", "--seed", "7"]
    code1, out1 = run_cli(argv, capsys)
    code2, out2 = run_cli(argv, capsys)
    assert code1 == code2 == 0
    assert out1 == out2  # byte-identical for fixed config and seed
    doc = json.loads(out1)
    assert set(doc) == {"config", "checks", "summary"}
    assert doc["summary"]["fail"] == 0
    for rec in doc["checks"]:
        assert set(rec) <= {"id", "anchor", "status", "witness"}
        assert rec["status"] in ("pass", "fail")


def test_no_silent_skips(capsys):
    for cmd in ("schur", "qdim", "borchardt"):
        config = RunConfig()
        declared = [s.id for s in checks_for(cmd, config)]
        code, out = run_cli([cmd, "--json"] + FAST, capsys)
        doc = json.loads(out)
        got = [rec["id"] for rec in doc["checks"]]
        assert got == [s.id for s in checks_for(cmd, RunConfig(trials=3))] or got == declared


def test_narrowing_flags(capsys):
    code, out = run_cli(["qdim", "--identity", "euler", "--l", "0", "--order", "20", "--json"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert [rec["id"] for rec in doc["checks"]] == ["qdim-euler-family"]

    code, out = run_cli(["borchardt", "--n", "4", "--trials", "25", "--seed", "7"], capsys)
    assert code == 0
    assert "25 exact equalities" in out


def test_failure_injection_report():
    """A manufactured failing check carries its witness into the report."""

    def bad_check(config, rng):
        from btau.checks import expect

        expect(False, "first mismatching coefficient at q^3: 5 vs 7")

    spec = CheckSpec("injected-failure", "always fails", bad_check)
    results = run_suite([spec], RunConfig())
    assert results[0].status == "fail"
    assert "q^3" in results[0].witness
    buf = io.StringIO()
    emit_json(RunConfig(), results, buf)
    doc = json.loads(buf.getvalue())
    assert doc["checks"][0]["witness"].startswith("first mismatching")
    assert doc["summary"] == {"pass": 0, "fail": 1}


def test_crash_is_reported_not_skipped():
    def crashing(config, rng):
        raise RuntimeError("boom")

    results = run_suite([CheckSpec("crash", "crashes", crashing)], RunConfig())
    assert results[0].status == "fail"
    assert "boom" in results[0].witness


def test_thread_pool_keeps_declared_order(monkeypatch):
    monkeypatch.setenv("BTAU_THREADS", "4")
    config = RunConfig(degree=4, p_window=4, param_order=2, q_order=10, trials=2)
    specs = checks_for("schur", config)
    results = run_suite(specs, config)
    assert [r.id for r in results] == [s.id for s in specs]
    assert all(r.status == "pass" for r in results)
