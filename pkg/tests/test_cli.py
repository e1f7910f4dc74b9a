"""Tests for the command line interface."""

import csv
import json

from click.testing import CliRunner
import pytest

from pycarroll.cli import cli
from pycarroll.const import CSV_COLUMNS
from pycarroll.maxwell import symbolic
from pycarroll.scalar_field import ScalarExpr

WAVE_E = "cos(x3 - ln(t)), 0, 0"
WAVE_B = "0, -cos(x3 - ln(t)), 0"


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


def test_verify_line_bundle(runner):
    result = runner.invoke(cli, ["--samples", "20", "verify", "--n", "1"])
    assert result.exit_code == 0, result.output


def test_verify_json_report(runner, tmp_path):
    out = tmp_path / "report.json"
    result = runner.invoke(
        cli, ["--samples", "10", "--format", "json", "--output", str(out), "verify", "--n", "1"]
    )
    assert result.exit_code == 0, result.output
    entries = json.loads(out.read_text())
    assert entries
    assert all(entry["status"] == "pass" for entry in entries)


def test_verify_reads_seed_from_environment(runner):
    result = runner.invoke(cli, ["--samples", "10", "verify", "--n", "1"], env={"CARROLL_SEED": "9"})
    assert result.exit_code == 0, result.output


def test_star_table_json(runner, tmp_path):
    out = tmp_path / "stars.json"
    result = runner.invoke(
        cli, ["--format", "json", "--output", str(out), "star-table", "--n", "2"]
    )
    assert result.exit_code == 0, result.output
    rows = json.loads(out.read_text())
    assert len(rows) == 8
    assert rows[0]["Monomial"] == "1"


def test_star_table_with_metric_and_connection(runner):
    result = runner.invoke(
        cli, ["star-table", "--metric", "1+x1^2, 0; 0, 1", "--connection", "0, x1"]
    )
    assert result.exit_code == 0, result.output


def test_star_table_rejects_asymmetric_metric(runner):
    result = runner.invoke(cli, ["star-table", "--metric", "1, x1; 0, 1"])
    assert result.exit_code == 2


def test_maxwell_check_plane_wave(runner):
    result = runner.invoke(cli, ["maxwell-check", "--e", WAVE_E, "--b", WAVE_B])
    assert result.exit_code == 0, result.output


def test_maxwell_check_reports_violation(runner, tmp_path):
    out = tmp_path / "residual.json"
    result = runner.invoke(
        cli,
        ["--format", "json", "--output", str(out), "maxwell-check", "--e", "0,0,0", "--b", "0,0,x1"],
    )
    assert result.exit_code == 1
    entries = json.loads(out.read_text())
    assert {entry["status"] for entry in entries} == {"fail"}


def test_maxwell_check_reports_disagreeing_formulations(runner, tmp_path, monkeypatch):
    zero = ScalarExpr(0)
    monkeypatch.setattr(
        symbolic, "vector_residuals", lambda _f: (zero, (zero,) * 3, zero, (zero,) * 3)
    )
    out = tmp_path / "residual.json"
    result = runner.invoke(
        cli,
        ["--format", "json", "--output", str(out), "maxwell-check", "--e", "0,0,0", "--b", "0,0,x1"],
    )
    assert result.exit_code == 1
    entries = json.loads(out.read_text())
    assert [entry["status"] for entry in entries] == ["fail", "pass", "fail"]
    assert entries[-1]["case"] == "formulations agree"


@pytest.mark.parametrize(
    "e_text, b_text",
    [("x1 +, 0, 0", "0, 0, 0"), ("0, 0", "0, 0, 0"), ("y, 0, 0", "0, 0, 0")],
)
def test_maxwell_check_rejects_bad_input(runner, e_text, b_text):
    result = runner.invoke(cli, ["maxwell-check", "--e", e_text, "--b", b_text])
    assert result.exit_code == 2


def test_maxwell_run_csv(runner, tmp_path):
    config = tmp_path / "wave.cfg"
    config.write_text("n = 8\nl_box = 2*pi\ndu = 0.2\nsteps = 4\noutput.cadence = 2\n")
    out = tmp_path / "series.csv"
    result = runner.invoke(cli, ["--format", "csv", "--output", str(out), "maxwell-run", str(config)])
    assert result.exit_code == 0, result.output
    rows = list(csv.DictReader(out.read_text().splitlines()))
    assert list(rows[0]) == CSV_COLUMNS
    assert [row["step"] for row in rows] == ["0", "2", "4"]
    energies = [float(row["energy"]) for row in rows]
    assert max(abs(e - energies[0]) for e in energies) < 1e-9 * energies[0]


@pytest.mark.parametrize(
    "text",
    [
        "n = 8\nl_box = 2*pi\n",
        "n = 8\nl_box = 2*pi\ndu = 1.0\nsteps = 4\n",
        "n = 8\nl_box = 2*pi\ndu = 0.2\nsteps = 4\ninit.e0 = 0, 0, 1\n",
    ],
)
def test_maxwell_run_rejects_bad_config(runner, tmp_path, text):
    config = tmp_path / "bad.cfg"
    config.write_text(text)
    result = runner.invoke(cli, ["maxwell-run", str(config)])
    assert result.exit_code == 2


@pytest.mark.slow
def test_horizon_table(runner):
    result = runner.invoke(cli, ["horizon-table", "--kappa", "0.5"])
    assert result.exit_code == 0, result.output


def test_horizon_scan_json(runner, tmp_path):
    out = tmp_path / "scan.json"
    result = runner.invoke(
        cli,
        [
            "--format",
            "json",
            "--output",
            str(out),
            "horizon-scan",
            "--kappa",
            "0.5",
            "--l-max",
            "1",
            "--lambda-max",
            "1",
            "--degree",
            "0",
        ],
    )
    assert result.exit_code == 0, result.output
    hits = json.loads(out.read_text())
    assert [(hit["degree"], hit["l"], hit["lambda"], hit["pattern"]) for hit in hits] == [
        (0, 0, 0, "f")
    ]


def test_horizon_scan_rejects_large_degree(runner):
    result = runner.invoke(cli, ["horizon-scan", "--l-max", "5"])
    assert result.exit_code == 2
