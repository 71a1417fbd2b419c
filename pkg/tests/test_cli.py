import json

import pytest

from zetamoments.cli import main, parse_complex, parse_int_range


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parsers():
    assert parse_complex("0.5+100i") == 0.5 + 100j
    assert parse_complex("-3i") == -3j
    assert parse_int_range("0..3") == [0, 1, 2, 3]
    assert parse_int_range("1,5") == [1, 5]


def test_eval_two_methods(capsys):
    code, out, _ = run(capsys, "eval", "--s", "0.5+100i", "--method", "afe,reference", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# ")
    assert lines[1] == "s,afe,reference,abs_diff"
    assert lines[2].startswith("0.5+100i,")


def test_conj_gk_table(capsys):
    code, out, _ = run(capsys, "conj", "--gk", "0..6", "--format", "json")
    assert code == 0
    values = [int(r["numerator"]) for r in json.loads(out)["rows"]]
    assert values[:5] == [1, 1, 2, 42, 24024]


def test_json_complex_pairs(capsys):
    code, out, _ = run(capsys, "eval", "--s", "2+1i", "--method", "reference", "--format", "json")
    row = json.loads(out)["rows"][0]
    assert set(row["reference"]) == {"re", "im"}


def test_csv_is_deterministic(capsys, tmp_path):
    argv = ["polymean", "--random", "4", "--N", "12", "--T", "40", "--seed", "7", "--format", "csv"]
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second
    other = run(capsys, *argv[:-4], "--seed", "8", "--format", "csv")[1]
    assert other != first


def test_validation_exit_code(capsys):
    code, _, err = run(capsys, "eval", "--s", "0.5+10i", "--method", "afe")
    assert code == 2
    assert json.loads(err.strip().splitlines()[-1])["error"] == "validation"


def test_unknown_flag_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["eval", "--s", "1+1i", "--bogus", "3"])
    assert exc.value.code == 2


def test_unknown_config_key_rejected(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"k": 1, "T": "50", "nope": 1}))
    assert run(capsys, "polymean", "--config", str(cfg))[0] == 2
    cfg.write_text(json.dumps({"k": 1, "T": "50"}))
    code, out, _ = run(capsys, "polymean", "--config", str(cfg), "--format", "csv")
    assert code == 0 and "k,T,N" in out


def test_budget_exit_code(capsys):
    code, _, err = run(capsys, "moment", "--T", "300", "--abs-tol", "1e-15", "--max-evals", "100")
    assert code == 3


def test_tolerance_exit_code(capsys):
    assert run(capsys, "conj", "--ak", "6", "--prime-cutoff", "1000", "--tol", "1e-9")[0] == 1


def test_factorize_and_asym(capsys):
    code, out, _ = run(capsys, "factorize", "--series", "dk2", "--k", "2", "--J", "8", "--format", "json")
    row = json.loads(out)["rows"][0]
    assert row["C"] == "4 -1 0 0 0 0 0" and row["round_trip_exact"] is True
    code, out, _ = run(capsys, "asym", "--series", "phi", "--X", "10000", "--format", "json")
    assert abs(json.loads(out)["rows"][0]["rel_residual"]) < 1e-3


def test_verify_all_exit_status(capsys):
    code, out, _ = run(capsys, "verify-all", "--profile", "quick", "--only", "10..12", "--format", "csv")
    assert code == 0 and out.count("PASS") == 3
    # criterion 8 carries a claim that does not hold; the run reports it and exits 1
    code, out, _ = run(capsys, "verify-all", "--only", "8", "--format", "csv")
    assert code == 1 and "FAIL" in out
