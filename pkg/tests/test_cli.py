"""CLI surface: flags, formats, exit codes, schemas, figures, determinism."""

import json
from importlib import resources

import jsonschema
import pytest

from blockcrit.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def validate(kind: str, payload: dict):
    schema_text = (
        resources.files("blockcrit") / "schemas" / f"{kind}.schema.json"
    ).read_text()
    jsonschema.validate(payload, json.loads(schema_text))


# ---------------------------------------------------------------------------
# enumerate
# ---------------------------------------------------------------------------

def test_enumerate_prints_exact_values(capsys, tmp_path):
    code, out, _ = run_cli(
        capsys, "enumerate", "--rmax", "1", "--tables", str(tmp_path / "t.json")
    )
    assert code == 0
    assert "b_1 = 1/12" in out
    code, out, _ = run_cli(
        capsys, "enumerate", "--rmax", "2", "--tables", str(tmp_path / "t2.json")
    )
    assert code == 0
    assert "c_{1,1} = 1/8" in out
    assert "b_2 = 5/48" in out


def test_enumerate_cache_bytes_stable(capsys, tmp_path):
    path = tmp_path / "cache.json"
    code, _, _ = run_cli(capsys, "enumerate", "--rmax", "2", "--tables", str(path))
    assert code == 0
    first = path.read_bytes()
    code, _, _ = run_cli(capsys, "enumerate", "--rmax", "2", "--tables", str(path))
    assert code == 0
    assert path.read_bytes() == first


def test_enumerate_json_schema(capsys, tmp_path):
    code, out, _ = run_cli(
        capsys,
        "enumerate", "--rmax", "2", "--tables", str(tmp_path / "t.json"),
        "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    validate("tables-summary", payload)
    assert payload["b"] == ["1/12", "5/48"]


def test_enumerate_respects_env_dir(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("BLOCKCRIT_TABLES", str(tmp_path))
    code, _, _ = run_cli(capsys, "enumerate", "--rmax", "1")
    assert code == 0
    assert (tmp_path / "blockcrit-tables-rmax1.json").exists()


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------

def test_constants_c1_csv(capsys):
    code, out, _ = run_cli(capsys, "constants", "c1")
    assert code == 0
    header, row = out.strip().splitlines()
    assert header == "constant,value,error_estimate"
    name, value, err = row.split(",")
    assert name == "c1"
    assert abs(float(value) - 0.378911) <= 5e-6
    assert float(err) <= 1e-6


def test_constants_c1_json_schema(capsys):
    code, out, _ = run_cli(capsys, "constants", "c1", "--format", "json")
    assert code == 0
    validate("constants-c1", json.loads(out))


def test_constants_c2_row(capsys, tmp_path):
    tables = str(tmp_path / "t3.json")
    run_cli(capsys, "enumerate", "--rmax", "3", "--tables", tables)
    code, out, _ = run_cli(
        capsys,
        "constants", "c2", "--lambda", "0", "--rmax", "3", "--tables", tables,
    )
    assert code == 0
    header, row = out.strip().splitlines()
    assert header == "lambda,alpha,c2,tail_mass"
    fields = row.split(",")
    assert float(fields[0]) == 0.0
    assert float(fields[1]) == 1.0
    assert 0.0 < float(fields[3]) < 0.05


def test_constants_c2_json_and_figures(capsys, tmp_path):
    tables = str(tmp_path / "t3.json")
    run_cli(capsys, "enumerate", "--rmax", "3", "--tables", tables)
    figdir = tmp_path / "figs"
    code, out, _ = run_cli(
        capsys,
        "constants", "c2", "--lambda=-2,0", "--rmax", "3", "--tables", tables,
        "--format", "json", "--figures", str(figdir),
    )
    assert code == 0
    payload = json.loads(out)
    validate("constants-c2", payload)
    assert len(payload["rows"]) == 2
    png = figdir / "constants-c2.png"
    assert png.exists() and png.stat().st_size > 0


def test_constants_c2_requires_lambda(capsys):
    code, _, err = run_cli(capsys, "constants", "c2")
    assert code == 2
    assert "--lambda" in err


def test_constants_c2_tail_guard_exit_code(capsys, tmp_path):
    tables = str(tmp_path / "t2.json")
    run_cli(capsys, "enumerate", "--rmax", "2", "--tables", tables)
    code, _, err = run_cli(
        capsys, "constants", "c2", "--lambda", "2", "--rmax", "2", "--tables", tables
    )
    assert code == 3
    assert "tail_mass" in err


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def test_simulate_lambda_to_m_and_determinism(capsys, tmp_path):
    args = [
        "simulate", "--n", "1000", "--lambda", "0", "--trials", "200",
        "--seed", "5", "--parallelism", "1",
    ]
    code, out1, _ = run_cli(capsys, *args)
    assert code == 0
    header, row = out1.strip().splitlines()
    assert header == "n,M,lambda,trials,mean,stderr,seed"
    assert row.split(",")[:2] == ["1000", "500"]       # M = n/2 at lambda = 0
    code, out2, _ = run_cli(capsys, *args)
    assert out2 == out1
    code, out3, _ = run_cli(capsys, *(args[:-1] + ["2"]))
    assert out3 == out1                                # parallelism-invariant


def test_simulate_json_schema_and_figure(capsys, tmp_path):
    figdir = tmp_path / "figs"
    code, out, _ = run_cli(
        capsys,
        "simulate", "--n", "100", "--m", "50", "--trials", "100", "--seed", "3",
        "--parallelism", "1", "--format", "json", "--figures", str(figdir),
    )
    assert code == 0
    payload = json.loads(out)
    validate("simulate", payload)
    assert payload["results"][0]["M"] == 50
    assert (figdir / "simulate-hist-n100-m50.png").exists()


def test_simulate_output_file(capsys, tmp_path):
    out_path = tmp_path / "sim.csv"
    code, out, _ = run_cli(
        capsys,
        "simulate", "--n", "50", "--m", "25", "--trials", "10", "--seed", "1",
        "--parallelism", "1", "--output", str(out_path),
    )
    assert code == 0
    assert out == ""
    assert out_path.read_text().startswith("n,M,lambda")


def test_simulate_requires_m_or_lambda(capsys):
    code = main(["simulate", "--n", "10", "--trials", "5", "--seed", "1"])
    assert code == 2


# ---------------------------------------------------------------------------
# compare
# ---------------------------------------------------------------------------

def test_compare_rejects_degenerate_point(capsys):
    code, _, err = run_cli(
        capsys,
        "compare", "--scenario", "subcritical", "--n", "3", "--m", "3",
        "--trials", "10", "--seed", "1",
    )
    assert code == 2
    assert "outside asymptotic regime" in err


def test_compare_critical_json(capsys, tmp_path):
    tables = str(tmp_path / "t6.json")
    run_cli(capsys, "enumerate", "--rmax", "6", "--tables", tables)
    figdir = tmp_path / "figs"
    code, out, _ = run_cli(
        capsys,
        "compare", "--scenario", "critical", "--n", "10000", "--lambda", "0",
        "--trials", "150", "--seed", "12", "--parallelism", "2",
        "--tables", tables, "--band", "0.5:2.0", "--format", "json",
        "--figures", str(figdir),
    )
    assert code == 0
    payload = json.loads(out)
    validate("compare", payload)
    assert payload["within_band"] is True
    assert payload["M"] == 5000
    assert (figdir / "compare-critical.png").exists()


def test_compare_band_failure_exit_code(capsys, tmp_path):
    tables = str(tmp_path / "t6.json")
    run_cli(capsys, "enumerate", "--rmax", "6", "--tables", tables)
    code, out, _ = run_cli(
        capsys,
        "compare", "--scenario", "critical", "--n", "10000", "--lambda", "0",
        "--trials", "80", "--seed", "12", "--parallelism", "2",
        "--tables", tables, "--band", "42.0:43.0",
    )
    assert code == 3
    assert "False" in out.strip().splitlines()[1]
