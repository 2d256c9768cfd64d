import csv
import io
import json
import math

import pytest

from catbell import cli


def run_cli(capsys, *args):
    code = cli.main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_eval_csv_values(capsys):
    code, out, _ = run_cli(capsys, "eval", "--family", "scs-even", "--gamma", "0", "--points", "0,0")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# catbell eval.v1")
    assert "units=" in lines[0] and "squeeze" in lines[0]
    rows = list(csv.DictReader(line for line in lines if not line.startswith("#")))
    assert float(rows[0]["wigner"]) == pytest.approx(2.0 / math.pi)
    assert float(rows[0]["husimi"]) == pytest.approx(1.0 / math.pi)


def test_eval_json_csv_round_trip(capsys):
    args = ("eval", "--family", "ecs-psi-minus", "--gamma", "1",
            "--points", "0.1,0.2,-0.3,0.05;0.0,0.0,0.0,0.0")
    code, out_csv, _ = run_cli(capsys, *args)
    assert code == 0
    code, out_json, _ = run_cli(capsys, *args, "--format", "json")
    assert code == 0
    parsed = json.loads(out_json)
    rows = list(csv.DictReader(
        line for line in out_csv.splitlines() if not line.startswith("#")))
    for csv_row, json_row in zip(rows, parsed["rows"]):
        assert float(csv_row["wigner"]) == json_row["wigner"]
        assert float(csv_row["husimi"]) == json_row["husimi"]


def test_eval_grid_with_fixed_b(capsys):
    code, out, _ = run_cli(
        capsys, "eval", "--family", "ecs-phi-plus", "--gamma", "0.8",
        "--grid=-0.2:0.2:3", "--fixed-b=0.1,0.0",
    )
    assert code == 0
    rows = list(csv.DictReader(line for line in out.splitlines() if not line.startswith("#")))
    assert len(rows) == 9
    assert all(float(r["b_re"]) == 0.1 for r in rows)


def test_eval_usage_errors(capsys):
    code, _, err = run_cli(capsys, "eval", "--family", "scs-even", "--gamma", "1")
    assert code == 2 and "usage" in err
    code, _, err = run_cli(capsys, "eval", "--family", "bogus", "--gamma", "1", "--points", "0,0")
    assert code == 2 and "scs-even" in err
    code, _, err = run_cli(capsys, "eval", "--family", "scs-even", "--gamma", "1",
                           "--points", "1,2,3")
    assert code == 2


def test_bell_deterministic_and_seed_stability(capsys):
    base = ("bell", "--family", "ecs-phi-minus", "--gamma", "1", "--scheme", "parity",
            "--n-starts", "24", "--format", "json")
    code, out1, _ = run_cli(capsys, *base)
    assert code == 0
    code, out2, _ = run_cli(capsys, *base)
    assert out1 == out2  # byte-identical across runs
    code, out3, _ = run_cli(capsys, *base, "--seed", "99")
    v_default = json.loads(out1)["result"]["value"]
    v_reseeded = json.loads(out3)["result"]["value"]
    assert abs(v_default - v_reseeded) <= 1e-4


def test_bell_csv_shape(capsys):
    code, out, _ = run_cli(capsys, "bell", "--family", "ecs-psi-minus", "--gamma", "0.8",
                           "--scheme", "onoff", "--n-starts", "8")
    assert code == 0
    rows = list(csv.DictReader(line for line in out.splitlines() if not line.startswith("#")))
    assert rows[0]["scheme"] == "onoff"
    assert float(rows[0]["value"]) > 2.0
    assert rows[0]["a_re"] != ""


def test_bell_numerical_failure_exit_code(capsys):
    code, _, err = run_cli(capsys, "bell", "--family", "ecs-psi-minus", "--gamma", "0.8",
                           "--scheme", "parity", "--n-starts", "2", "--max-iter", "1")
    assert code == 3
    assert "numerical" in err


def test_sweep_partial_failure_exit_code(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--family", "ess-minus", "--scheme", "parity",
                           "--gamma-grid", "0,0.6", "--s-grid", "0.1", "--n-starts", "6")
    assert code == 3
    rows = list(csv.DictReader(line for line in out.splitlines() if not line.startswith("#")))
    assert rows[0]["error"] != ""
    assert rows[1]["value"] != ""


def test_output_file_atomic(tmp_path, capsys):
    target = tmp_path / "table.csv"
    code, out, _ = run_cli(capsys, "eval", "--family", "scs-even", "--gamma", "0.5",
                           "--points", "0,0", "--output", str(target))
    assert code == 0
    assert out == ""
    content = target.read_text()
    assert content.startswith("# catbell eval.v1")
    leftovers = [p for p in tmp_path.iterdir() if p.name != "table.csv"]
    assert leftovers == []


def test_config_file_defaults_and_override(tmp_path, capsys):
    cfg = tmp_path / "catbell.conf"
    cfg.write_text("# defaults\nformat=json\nn-starts=6\n")
    code, out, _ = run_cli(capsys, "bell", "--family", "ecs-psi-minus", "--gamma", "0.8",
                           "--scheme", "parity", "--config", str(cfg))
    assert code == 0
    json.loads(out)  # format came from the config file
    code, out, _ = run_cli(capsys, "bell", "--family", "ecs-psi-minus", "--gamma", "0.8",
                           "--scheme", "parity", "--config", str(cfg), "--format", "csv")
    assert code == 0
    assert out.startswith("# catbell bell.v1")  # flag overrides config
    cfg.write_text("no-such-key=1\n")
    code, _, err = run_cli(capsys, "bell", "--family", "ecs-psi-minus", "--gamma", "0.8",
                           "--scheme", "parity", "--config", str(cfg))
    assert code == 2 and "no-such-key" in err


def test_oracle_check_json_and_mismatch_exit(capsys):
    code, out, _ = run_cli(capsys, "oracle-check", "--families", "scs-even",
                           "--gammas", "0.5", "--n-points", "4")
    assert code == 0
    report = json.loads(out)
    assert report["passed"] is True
    code, out, err = run_cli(capsys, "oracle-check", "--families", "scs-even",
                             "--gammas", "0.5", "--n-points", "4", "--perturb", "1e-4")
    assert code == 4
    report = json.loads(out)
    assert report["passed"] is False
    assert "scs-even" in report["first_failure"]
    assert "point" in report["first_failure"]


def test_experiment_ideal_csv(capsys):
    code, out, _ = run_cli(capsys, "experiment", "--scheme", "parity", "--ideal", "phi2",
                           "--n-starts", "16", "--box-halfwidth", "1.5")
    assert code == 0
    rows = list(csv.DictReader(line for line in out.splitlines() if not line.startswith("#")))
    assert float(rows[0]["value"]) == pytest.approx(2.401, abs=5e-3)


def test_experiment_threshold_csv_summary(capsys):
    code, out, _ = run_cli(capsys, "experiment", "--scheme", "parity",
                           "--g-grid", "1.03,1.04", "--n-starts", "16",
                           "--box-halfwidth", "1.5")
    assert code == 0
    comments = [l for l in out.splitlines() if l.startswith("#")]
    assert any("f_star=0.91" in c for c in comments)
    assert any("crossing_found=True" in c for c in comments)


def test_argparse_usage_exit():
    with pytest.raises(SystemExit) as exc:
        cli.main(["bell", "--family", "x"])  # missing required flags
    assert exc.value.code == 2
