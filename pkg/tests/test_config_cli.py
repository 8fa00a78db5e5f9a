"""Tests for config round-trips, the CLI surface, and file formats."""

import json
import math

import numpy as np
import pytest

from bellccp import canonical_strategy, gyni_inequality, input_tuples, make_scenario
from bellccp.cli import main
from bellccp.config import (
    inequality_from_config,
    load_inequality,
    load_strategy,
    scenario_from_config,
    scenario_to_config,
    strategy_fingerprint,
    strategy_to_config,
    strategy_from_config,
)
from bellccp.quantum import evaluate_strategy


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_bound_output_exact(capsys):
    code, out, _ = run_cli(capsys, "bound", "--ineq", "gyni")
    assert code == 0
    assert json.loads(out) == {"classical_bound": 6, "success_bound": 0.875}
    code, out, _ = run_cli(capsys, "bound", "--ineq", "svetlichny")
    assert code == 0
    assert json.loads(out) == {"classical_bound": 4, "success_bound": 0.75}


def test_eval_output_schema(capsys):
    code, out, _ = run_cli(capsys, "eval", "--ineq", "svetlichny",
                           "--strategy", "svetlichny-paper")
    assert code == 0
    payload = json.loads(out)
    assert sorted(payload) == ["bell_value", "bell_value_normalized", "success_probability"]
    assert payload["bell_value"] == pytest.approx(4 * math.sqrt(2), abs=1e-9)
    assert payload["success_probability"] == pytest.approx(0.8535533905932737, abs=1e-9)


def test_eval_csv_format(capsys):
    code, out, _ = run_cli(capsys, "eval", "--ineq", "gyni", "--strategy", "gyni-paper",
                           "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "x_1,x_2,x_3,E"
    assert len(lines) == 9
    first = lines[1].split(",")
    assert first[:3] == ["-1", "-1", "-1"]
    assert abs(float(first[3]) + math.cos(math.pi / 8)) < 1e-2
    # lexicographic order of rows
    rows = [tuple(int(v) for v in line.split(",")[:3]) for line in lines[1:]]
    assert rows == list(input_tuples(3))


def test_simulate_summary_and_log(tmp_path, capsys):
    log_path = tmp_path / "session.jsonl"
    code, out, _ = run_cli(capsys, "simulate", "--ineq", "gyni", "--strategy", "gyni-paper",
                           "--rounds", "200", "--seed", "9", "--out", str(log_path))
    assert code == 0
    summary = json.loads(out)
    assert sorted(summary) == ["estimate", "rounds", "std_error", "successes"]
    assert summary["rounds"] == 200

    lines = log_path.read_text().splitlines()
    assert len(lines) == 201
    header = json.loads(lines[0])["header"]
    assert header["options"]["seed"] == 9
    assert "strategy_sha256" in header
    record = json.loads(lines[1])
    assert sorted(record) == ["a", "f_value", "guess", "m", "pass", "settings", "x", "y"]
    assert all(v in (-1, 1) for v in record["x"] + record["y"] + record["a"] + record["m"])
    assert record["pass"] == (record["guess"] == record["f_value"])


def test_simulate_replays_identically(capsys):
    args = ("simulate", "--ineq", "gyni", "--strategy", "experiment-like",
            "--rounds", "500", "--seed", "4")
    _, first, _ = run_cli(capsys, *args)
    _, second, _ = run_cli(capsys, *args)
    assert first == second


def test_simulate_validation_exit_codes(capsys):
    code, _, err = run_cli(capsys, "simulate", "--ineq", "gyni", "--strategy", "gyni-paper",
                           "--rounds", "0", "--seed", "1")
    assert code == 1 and "rounds" in err
    code, _, err = run_cli(capsys, "simulate", "--ineq", "gyni", "--strategy", "gyni-paper",
                           "--rounds", "5")
    assert code == 1 and "--seed" in err
    code, _, err = run_cli(capsys, "optimize", "--ineq", "gyni")
    assert code == 1 and "--seed" in err
    code, _, err = run_cli(capsys, "bound", "--ineq", "not-a-thing")
    assert code == 1
    code, _, err = run_cli(capsys, "eval", "--ineq", "gyni", "--strategy", "gyni-paper",
                           "--noise-v", "1.5")
    assert code == 1


def test_unknown_flag_exits_one(capsys):
    code, _, err = run_cli(capsys, "bound", "--ineq", "gyni", "--frobnicate")
    assert code == 1
    assert "usage" in err.lower()


def test_simulate_with_bit_file_needs_no_seed(tmp_path, capsys):
    bits = tmp_path / "bits.bin"
    bits.write_bytes(bytes(range(256)) * 40)
    code, out, _ = run_cli(capsys, "simulate", "--ineq", "gyni", "--strategy", "gyni-paper",
                           "--rounds", "20", "--randomness", f"file:{bits}")
    assert code == 0
    assert json.loads(out)["rounds"] == 20


def test_simulate_with_beacon_records(tmp_path, capsys):
    records = tmp_path / "records.txt"
    records.write_text(("77" * 64 + "\n") * 30)
    args = ("simulate", "--ineq", "gyni", "--strategy", "gyni-paper",
            "--rounds", "10", "--randomness", f"beacon:{records}")
    code, out, _ = run_cli(capsys, *args)
    assert code == 0
    assert json.loads(out)["rounds"] == 10
    replay = run_cli(capsys, *args)[1]
    assert replay == out


def test_verify_reports_identity(capsys):
    code, out, _ = run_cli(capsys, "verify", "--ineq", "svetlichny", "--seed", "12",
                           "--strategies", "25")
    assert code == 0
    payload = json.loads(out)
    assert sorted(payload) == ["max_deviation", "ok", "seed", "strategies", "tolerance"]
    assert payload["ok"] is True
    assert payload["max_deviation"] <= 1e-9


def test_optimize_output_schema(capsys):
    code, out, _ = run_cli(capsys, "optimize", "--ineq", "chsh", "--seed", "1",
                           "--restarts", "2")
    assert code == 0
    assert sorted(json.loads(out)) == ["best_value", "best_value_normalized",
                                       "restarts", "seed", "success_probability",
                                       "sweeps_used"]


def test_module_entry_point():
    import subprocess
    import sys

    result = subprocess.run([sys.executable, "-m", "bellccp", "bound", "--ineq", "chsh"],
                            capture_output=True, text=True)
    assert result.returncode == 0
    assert json.loads(result.stdout) == {"classical_bound": 2, "success_bound": 0.75}


def test_report_contains_headline_numbers(capsys):
    code, out, _ = run_cli(capsys, "report")
    assert code == 0
    payload = json.loads(out)
    assert payload["gyni"]["classical_bound"] == 6
    assert payload["gyni"]["classical_success_bound"] == 0.875
    assert 7.3909 <= payload["gyni"]["quantum_value"] <= 7.3911
    assert payload["svetlichny"]["classical_bound"] == 4
    assert payload["svetlichny"]["quantum_value"] == pytest.approx(4 * math.sqrt(2), abs=1e-9)
    assert payload["experiment"]["success_probability"] == 0.9389375


def test_scenario_config_round_trip():
    scenario = make_scenario(3, [(1, 3), (2, 1), (3, 2)])
    assert scenario_from_config(scenario_to_config(scenario)) == scenario


def test_custom_inequality_file(tmp_path, capsys):
    config = {
        "scenario": {"n": 2, "visibility": [[1], [2]]},
        "coeffs": [{"x": [-1, -1], "q": 1}, {"x": [-1, 1], "q": 1},
                   {"x": [1, -1], "q": 1}, {"x": [1, 1], "q": -1}],
    }
    path = tmp_path / "chsh.json"
    path.write_text(json.dumps(config))
    code, out, _ = run_cli(capsys, "bound", "--ineq", str(path))
    assert code == 0
    assert json.loads(out) == {"classical_bound": 2, "success_bound": 0.75}


def test_strategy_config_round_trip(tmp_path):
    strategy = canonical_strategy("gyni-paper")
    config = strategy_to_config(strategy)
    assert config["state"] == "ghz"
    reloaded = strategy_from_config(config, strategy.scenario)
    assert strategy_fingerprint(reloaded) == strategy_fingerprint(strategy)

    # explicit-amplitude form
    amps = [[1 / math.sqrt(2), 0.0]] + [[0.0, 0.0]] * 6 + [[1 / math.sqrt(2), 0.0]]
    config2 = dict(config, state={"amplitudes": amps})
    loaded = strategy_from_config(config2, strategy.scenario)
    value = evaluate_strategy(loaded, gyni_inequality())
    assert value == pytest.approx(
        evaluate_strategy(strategy, gyni_inequality()), abs=1e-6)


def test_strategy_visibility_v(tmp_path):
    strategy = canonical_strategy("gyni-paper")
    config = strategy_to_config(strategy, visibility_v=0.5)
    loaded = strategy_from_config(config, strategy.scenario)
    ideal = evaluate_strategy(strategy, gyni_inequality())
    assert evaluate_strategy(loaded, gyni_inequality()) == pytest.approx(
        0.5 * ideal, abs=1e-9)


def test_dump_config_round_trip(tmp_path, capsys):
    code, out, _ = run_cli(capsys, "eval", "--ineq", "gyni", "--strategy", "gyni-paper",
                           "--dump-config")
    assert code == 0
    doc = json.loads(out)
    ineq = load_inequality(doc["inequality"])
    assert ineq == gyni_inequality()
    strategy = load_strategy(doc["strategy"], ineq.scenario)
    assert strategy_fingerprint(strategy) == strategy_fingerprint(
        canonical_strategy("gyni-paper"))

    path = tmp_path / "dump.json"
    path.write_text(out)
    code, out2, _ = run_cli(capsys, "eval", "--ineq", str(path), "--strategy", str(path))
    assert code == 0
    direct = run_cli(capsys, "eval", "--ineq", "gyni", "--strategy", "gyni-paper")[1]
    assert json.loads(out2) == json.loads(direct)


def test_inequality_from_config_rejects_bad_docs():
    from bellccp import ValidationError

    with pytest.raises(ValidationError):
        inequality_from_config({"coeffs": []})
    with pytest.raises(ValidationError):
        inequality_from_config({"scenario": {"n": 2, "visibility": [[1], [2]]},
                                "coeffs": [{"x": [1, 1]}]})


def test_threads_flag_accepted(capsys):
    code, out, _ = run_cli(capsys, "bound", "--ineq", "chsh", "--threads", "4")
    assert code == 0
    code, _, _ = run_cli(capsys, "bound", "--ineq", "chsh", "--threads", "0")
    assert code == 1


def test_out_flag_writes_file(tmp_path, capsys):
    out_path = tmp_path / "bound.json"
    code, out, _ = run_cli(capsys, "bound", "--ineq", "gyni", "--out", str(out_path))
    assert code == 0
    assert out == ""
    assert json.loads(out_path.read_text()) == {"classical_bound": 6, "success_bound": 0.875}


def test_eval_noise_v_scales_value(capsys):
    _, ideal_out, _ = run_cli(capsys, "eval", "--ineq", "gyni", "--strategy", "gyni-paper")
    _, noisy_out, _ = run_cli(capsys, "eval", "--ineq", "gyni", "--strategy", "gyni-paper",
                              "--noise-v", "0.5")
    ideal = json.loads(ideal_out)["bell_value"]
    noisy = json.loads(noisy_out)["bell_value"]
    assert noisy == pytest.approx(0.5 * ideal, abs=1e-9)


def test_optimize_with_state_flag(capsys):
    code, out, _ = run_cli(capsys, "optimize", "--ineq", "chsh", "--seed", "5",
                           "--restarts", "4", "--optimize-state")
    assert code == 0
    assert json.loads(out)["best_value"] == pytest.approx(2 * math.sqrt(2), abs=1e-6)


def test_numeric_errors_map_to_exit_two(monkeypatch, capsys):
    from bellccp import cli as cli_module
    from bellccp.errors import NumericError

    def broken(args):
        raise NumericError("synthetic inconsistency")

    monkeypatch.setitem(cli_module._COMMANDS, "report", broken)
    code, _, err = run_cli(capsys, "report")
    assert code == 2
    assert "numeric" in err
