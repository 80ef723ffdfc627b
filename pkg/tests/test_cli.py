import csv
import io
import json
import subprocess
import sys

import pytest

from erlangloss.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_blocking_integer():
    code, out, _ = run("blocking", "2", "--load", "1")
    assert code == 0 and float(out) == 0.2
    assert out.strip() == "0.20000000000000001"  # 17 significant digits


def test_blocking_zero_servers():
    code, out, _ = run("blocking", "0", "--load", "5")
    assert code == 0 and float(out) == 1.0


def test_blocking_real_route():
    code, out, _ = run("blocking", "1.5", "--load", "1")
    assert code == 0
    assert float(out) == pytest.approx(0.32590231333125914435, rel=1e-13)


def test_blocking_method_override():
    _, as_int, _ = run("blocking", "2", "--load", "1")
    _, as_real, _ = run("blocking", "2", "--load", "1", "--method", "real")
    assert float(as_real) == pytest.approx(float(as_int), rel=1e-12)
    code, _, err = run("blocking", "2.5", "--load", "1", "--method", "int")
    assert code != 0 and "integer" in err


def test_blocking_json():
    code, out, _ = run("blocking", "2", "--load", "1", "--format", "json")
    assert json.loads(out) == {"servers": 2, "lambda": 1.0, "method": "int", "blocking": 0.2}


@pytest.mark.parametrize("argv", [
    ("blocking", "-1", "--load", "1"),
    ("blocking", "abc", "--load", "1"),
    ("blocking", "2", "--load", "0"),
])
def test_blocking_errors(argv):
    code, out, err = run(*argv)
    assert code != 0 and out == "" and err


def test_inverse_servers():
    code, out, _ = run("inverse", "servers", "--load", "1", "--target", "0.2")
    assert code == 0 and out.strip() == "2"


def test_inverse_traffic():
    code, out, _ = run("inverse", "traffic", "--servers", "1", "--target", "0.5")
    assert code == 0 and float(out) == pytest.approx(1.0, rel=1e-9)


def test_inverse_servers_real():
    code, out, _ = run("inverse", "servers-real", "--load", "1", "--target", "0.5")
    assert code == 0 and float(out) == pytest.approx(1.0, abs=1e-9)


def test_inverse_round_trip_flag():
    code, out, _ = run("inverse", "servers-real", "--load", "3", "--target", "0.1", "--round-trip")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 2
    residual = float(lines[1].split()[-1])
    assert abs(residual) < 1e-8


def test_inverse_missing_argument():
    code, _, err = run("inverse", "traffic", "--target", "0.5")
    assert code != 0 and "--servers" in err


def test_verify_small():
    code, out, err = run("verify", "--n-max", "5", "--loads", "1", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows and all(row["passed"] == "true" for row in rows)
    assert "failed=0" in err


def test_verify_empty_loads():
    code, out, err = run("verify", "--loads", "")
    assert code == 0 and out == ""
    assert "total=0" in err


def test_verify_json_lines():
    code, out, _ = run("verify", "--n-max", "3", "--loads", "2", "--x-max", "1", "--format", "json")
    assert code == 0
    assert all(json.loads(line)["passed"] for line in out.splitlines())


def test_verify_failure_exit_code(monkeypatch):
    from erlangloss import properties

    real = properties.run_sweep

    def rigged(grid):
        return real(grid) + [properties.CheckReport("synthetic", 1.0, lhs=1.0, rhs=0.0)]

    monkeypatch.setattr(properties, "run_sweep", rigged)
    code, _, err = run("verify", "--n-max", "2", "--loads", "1", "--x-max", "0", "--failures-only")
    assert code == 1 and "failed=1" in err


def test_table_small():
    code, out, _ = run("table", "--n", "0..2", "--loads", "1")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert [float(r["blocking"]) for r in rows] == [1.0, 0.5, 0.2]
    assert float(rows[2]["scaled_partial_sum"]) == pytest.approx(0.9196986029286058, rel=1e-15)


def test_table_single_row():
    code, out, _ = run("table", "--n", "0..0", "--loads", "1", "--format", "json")
    assert code == 0
    (row,) = [json.loads(line) for line in out.splitlines()]
    assert row["blocking"] == 1.0


def test_table_bad_range():
    code, _, err = run("table", "--n", "5..2")
    assert code != 0 and err


def test_simulate_zero_servers():
    code, out, _ = run("simulate", "--servers", "0", "--load", "1", "--arrivals", "100", "--seed", "7")
    data = json.loads(out)
    assert code == 0 and data["estimate"] == 1.0 and data["blocked"] == 100


def test_simulate_auto_seed_reports_seed():
    code, out, _ = run("simulate", "--servers", "1", "--load", "1", "--arrivals", "10", "--seed", "auto")
    assert code == 0 and isinstance(json.loads(out)["seed"], int)


def test_simulate_bad_seed():
    code, _, err = run("simulate", "--servers", "1", "--load", "1", "--seed", "x")
    assert code != 0 and "seed" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "erlangloss", "blocking", "1", "--load", "1"],
                          capture_output=True, text=True, check=True)
    assert float(proc.stdout) == 0.5
