import csv
import json

import pytest

from xlramsey.cli import (
    CONFIG_ERROR,
    OK,
    VERIFY_FAILURE,
    parse_coloring,
    parse_oracle,
    parse_universe,
    run_experiment,
)
from xlramsey.largesets import FinSet
from xlramsey.machines import EMPTY


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def read_csv(path):
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.reader(fh))


def test_parse_universe_kinds():
    assert parse_universe("interval:2..6") == FinSet([2, 3, 4, 5, 6])
    assert parse_universe("evens:2..10") == FinSet([2, 4, 6, 8, 10])
    assert parse_universe("evens:3..9") == FinSet([4, 6, 8])
    assert parse_universe("{1,5,9}") == FinSet([1, 5, 9])
    with pytest.raises(Exception):
        parse_universe("odds:1..9")


def test_parse_oracle_and_coloring():
    assert parse_oracle(None) is EMPTY
    assert parse_oracle("{3,5}").member(3)
    c = parse_coloring("parity-of-min", EMPTY)
    assert c(FinSet([3, 4, 5, 6])) == 1
    with pytest.raises(Exception):
        parse_coloring("nope", EMPTY)


def test_enumerate_command(tmp_path, capsys):
    out = tmp_path / "sets.csv"
    code = run_experiment([
        "enumerate", "--universe", "{2,3,4,5}", "--out", str(out),
    ])
    assert code == OK
    rows = read_csv(out)
    assert rows == [["set"], ["{2,3,4}"], ["{2,3,5}"], ["{2,4,5}"]]
    assert "3" in capsys.readouterr().out


def test_color_trace(tmp_path):
    out = tmp_path / "trace.csv"
    code = run_experiment([
        "color", "--coloring", "parity-of-min", "--universe", "interval:2..6",
        "--out", str(out),
    ])
    assert code == OK
    rows = read_csv(out)
    assert rows[0] == ["set", "color"]
    assert rows[1] == ["{2,3,4}", "0"]


def test_search_chain_and_reverify(tmp_path):
    w = tmp_path / "w.json"
    r = tmp_path / "r.csv"
    code = run_experiment([
        "search", "--mode", "chain", "--coloring", "dh", "--oracle", "empty",
        "--universe", "evens:2..28",
        "--out-witness", str(w), "--out-report", str(r),
    ])
    assert code == OK
    payload = read_json(w)
    assert payload["kind"] == "chain" and payload["verified"]
    assert payload["config"]["coloring"] == "dh"
    code = run_experiment(["verify", "--witness", str(w)])
    assert code == OK


def test_search_min_homogeneous(tmp_path):
    w = tmp_path / "w.json"
    code = run_experiment([
        "search", "--mode", "min-homogeneous", "--coloring", "second-mod-min",
        "--universe", "interval:2..16", "--k", "5", "--out-witness", str(w),
    ])
    assert code == OK
    payload = read_json(w)
    assert payload["kind"] == "min-homogeneous" and payload["verified"]


def test_verify_failure_exit_code(tmp_path):
    w = tmp_path / "w.json"
    # a deliberately non-homogeneous witness for parity-of-min
    payload = {
        "schema": "xlramsey.witness/1", "kind": "homogeneous",
        "set": [2, 3, 4, 5, 6, 7], "color": 0, "per_min": None,
        "verified": True, "budget": {},
    }
    w.write_text(json.dumps(payload))
    code = run_experiment([
        "verify", "--witness", str(w), "--coloring", "parity-of-min",
    ])
    assert code == VERIFY_FAILURE


def test_config_error_exit_codes(tmp_path):
    code = run_experiment([
        "color", "--coloring", "nope", "--universe", "interval:2..6",
    ])
    assert code == CONFIG_ERROR
    code = run_experiment([
        "enumerate", "--universe", "odds:2..6",
    ])
    assert code == CONFIG_ERROR


def test_decode_writes_consistency_csv(tmp_path):
    w = tmp_path / "w.json"
    payload = {
        "schema": "xlramsey.witness/1", "kind": "homogeneous",
        "set": [2, 7000, 7500, 8000], "color": 1, "per_min": None,
        "verified": True, "budget": {},
    }
    w.write_text(json.dumps(payload))
    out = tmp_path / "verdicts.csv"
    code = run_experiment([
        "decode", "--witness", str(w), "--query", "1,1", "--query", "1,0",
        "--oracle", "{0,5}", "--out", str(out),
    ])
    assert code == OK
    rows = read_csv(out)
    assert rows[0][:5] == ["level", "element", "answer", "truth", "consistent"]
    assert rows[1][:5] == ["1", "1", "1", "1", "1"]
    assert rows[2][:5] == ["1", "0", "0", "0", "1"]


def test_reduce_roundtrip(tmp_path):
    w = tmp_path / "w.json"
    out = tmp_path / "out.json"
    # a homogeneous witness for the two-coloring derived from min-minus-one
    code = run_experiment([
        "search", "--mode", "min-homogeneous", "--coloring", "min-minus-one",
        "--universe", "interval:2..12", "--k", "5", "--out-witness", str(w),
    ])
    assert code == OK
    code = run_experiment([
        "reduce", "--direction", "rt-via-km", "--coloring", "parity-of-min",
        "--witness", str(w), "--out-witness", str(out),
    ])
    # parity-of-min is min-homogeneous on any set, so thinning verifies
    assert code == OK
    assert read_json(out)["verified"]


def test_reduce_km_to_rt(tmp_path):
    w = tmp_path / "w.json"
    out = tmp_path / "out.json"
    code = run_experiment([
        "search", "--mode", "homogeneous", "--coloring", "constant:0",
        "--universe", "interval:1..8", "--k", "4", "--out-witness", str(w),
    ])
    assert code == OK
    code = run_experiment([
        "reduce", "--direction", "km-to-rt", "--coloring", "min-minus-one",
        "--witness", str(w), "--out-witness", str(out),
    ])
    assert code == OK
    payload = read_json(out)
    assert payload["kind"] == "min-homogeneous" and payload["verified"]


def test_deterministic_outputs(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        code = run_experiment([
            "search", "--mode", "chain", "--coloring", "random:7",
            "--universe", "interval:2..24", "--out-witness", str(path),
        ])
        assert code == OK
    assert a.read_bytes() == b.read_bytes()


def test_config_file_supplies_defaults(tmp_path):
    cfg = tmp_path / "exp.ini"
    cfg.write_text(
        "[experiment]\nuniverse = interval:2..16\ncoloring = parity-of-min\n"
        "mode = chain\n"
    )
    w = tmp_path / "w.json"
    code = run_experiment([
        "search", "--coloring", "parity-of-min", "--config", str(cfg),
        "--out-witness", str(w),
    ])
    assert code == OK
    assert read_json(w)["config"]["universe"] == "interval:2..16"


def test_programs_file_restricts_dh(tmp_path):
    # a universe of divergers makes every jump approximation empty, so
    # the dh trace is identically zero
    progs = tmp_path / "programs.txt"
    progs.write_text("0\n\n2\n\n4\n\n7\n\n9\n")
    out = tmp_path / "trace.csv"
    code = run_experiment([
        "color", "--coloring", "dh", "--universe", "evens:2..12",
        "--programs", str(progs), "--out", str(out),
    ])
    assert code == OK
    rows = read_csv(out)
    assert all(r[1] == "0" for r in rows[1:])


def test_cutoff_env_override(monkeypatch):
    from xlramsey.decoders import default_truth_cutoff

    monkeypatch.setenv("XLRAMSEY_CUTOFF", "5000")
    assert default_truth_cutoff() == 5000
    monkeypatch.setenv("XLRAMSEY_CUTOFF", "junk")
    assert default_truth_cutoff() == 10 ** 6
    monkeypatch.delenv("XLRAMSEY_CUTOFF")
    assert default_truth_cutoff() == 10 ** 6
