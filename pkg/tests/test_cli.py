import json
import subprocess
import sys

import pytest

from pathhyper.cli import CHECK_IDS, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None), out


def test_eval_gauss_value(capsys):
    code, obj, _ = run(capsys, "eval", "2f1", "--a", "1", "--b", "1", "--c", "1", "--trunc", "4",
                       "--at", "0.5")
    assert code == 0
    assert obj["exact"] == "31/16" and obj["value"] == 1.9375


def test_eval_series_at_origin(capsys):
    code, obj, _ = run(capsys, "eval", "xa", "--n", "2", "--tau", '["1/2", "1/3"]', "--theta", "2",
                       "--trunc", "6", "--at", "0")
    assert code == 0 and obj["exact"] == "1/1"


def test_malformed_rational_is_usage_error(capsys):
    code, _, _ = run(capsys, "eval", "2f1", "--a", "1/0", "--b", "1", "--c", "1", "--at", "0.1")
    assert code == 2


def test_pole_is_precondition_error(capsys):
    code, _, _ = run(capsys, "eval", "2f1", "--a", "1", "--b", "1", "--c", "-1", "--trunc", "4",
                     "--at", "0.1")
    assert code == 3


def test_unknown_check_is_usage_error(capsys):
    assert run(capsys, "check", "no-such-identity")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


@pytest.mark.parametrize("argv", [
    ["check", "inverse-5.28", "--n", "4"],
    ["check", "identity-6.8", "--n", "3", "--points", "10", "--seed", "7"],
    ["check", "trace-gl2", "--trunc", "8", "--seed", "3"],
    ["weyl-check", "--theorem", "6.3", "--n", "3", "--mu", "0.7", "--points", "20", "--seed", "1"],
])
def test_documented_commands_pass(capsys, argv):
    code, obj, _ = run(capsys, *argv)
    assert code == 0 and obj["pass"] is True


def test_every_registered_check_runs(capsys):
    for check_id in CHECK_IDS:
        argv = ["check", check_id, "--seed", "2"]
        if check_id == "theorem-7.1":
            argv += ["--points", "2"]
        code, obj, _ = run(capsys, *argv)
        assert code == 0, (check_id, obj)


def test_trace_command_emits_series(capsys):
    code, obj, _ = run(capsys, "trace", "--algebra", "gl", "--n", "2", "--trunc", "6",
                       "--lambda", '["1/2", "-1/3"]', "--mu", "3/2")
    assert code == 0
    assert obj["report"]["pass"] and obj["trace"] is not None


def test_identical_config_gives_identical_output(capsys):
    argv = ["check", "weyl-6.4", "--n", "3", "--seed", "11"]
    first = run(capsys, *argv)[2]
    second = run(capsys, *argv)[2]
    assert first == second


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("PATHHYPER_SEED", "5")
    env_out = run(capsys, "check", "contiguity-a")[1]
    monkeypatch.delenv("PATHHYPER_SEED")
    flag_out = run(capsys, "check", "contiguity-a", "--seed", "5")[1]
    assert env_out == flag_out and env_out["seed"] == 5


def test_config_file_matches_flags(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"command": "check", "id": "identity-6.8", "n": 4, "points": 5,
                               "seed": 9}))
    from_file = run(capsys, "--config", str(cfg))[2]
    from_flags = run(capsys, "check", "identity-6.8", "--n", "4", "--points", "5", "--seed", "9")[2]
    assert from_file == from_flags


def test_bad_config_is_usage_error(capsys, tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text("{not json")
    assert run(capsys, "check", "inverse-5.28", "--config", str(cfg))[0] == 2


def test_quick_suite_writes_json(capsys, tmp_path):
    out = tmp_path / "out.json"
    code = main(["suite", "--profile", "quick", "--json", str(out), "--seed", "1"])
    capsys.readouterr()
    obj = json.loads(out.read_text())
    assert code == 0 and obj["pass"] and obj["total"] == len(CHECK_IDS)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pathhyper", "check", "inverse-5.28", "--n", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["pass"] is True
    assert "PASS" in proc.stderr
