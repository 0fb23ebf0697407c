"""Tests for the command-line interface."""

import json

import pandas as pd
import pytest
from click.testing import CliRunner
from openpyxl import load_workbook

from src.main import main
from src.reports.csv_report import CSV_COLUMNS, read_metadata
from src.studio.acceptance import CheckResult


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def config_file(tmp_path):
    """Create a small sweep configuration on disk."""
    path = tmp_path / "sweep.json"
    path.write_text(json.dumps({
        "model": {"variant": ["Dz", "Dx"], "J": 1.0, "gamma": 0.2, "Jz": 2.0, "D": 0.5},
        "Gamma": 0.02,
        "initial": {"family": "antiparallel", "alpha": [0.5, 1.0]},
        "time": {"start": 0, "stop": 2, "count": 5},
        "input": {"theta": 0.7, "phi": 0.0},
        "outputs": ["C", "F"],
    }))
    return path


class TestSweepCommand:
    """Test `sweep`."""

    def test_writes_csv_and_metadata(self, runner, config_file, tmp_path):
        out = tmp_path / "out.csv"
        result = runner.invoke(main, ["sweep", "--config", str(config_file), "--out", str(out)])

        assert result.exit_code == 0, result.output
        frame = pd.read_csv(out)
        assert list(frame.columns) == CSV_COLUMNS
        assert len(frame) == 2 * 2 * 5
        meta = read_metadata(tmp_path / "out.csv.meta")
        assert meta["rows"] == "20"
        assert meta["grid_points"] == "20"
        assert meta["recipe"] == ""
        assert json.loads(meta["config"])["outputs"] == ["C", "F"]

    def test_workers_give_same_bytes(self, runner, config_file, tmp_path):
        serial, parallel = tmp_path / "serial.csv", tmp_path / "parallel.csv"
        runner.invoke(main, ["sweep", "-c", str(config_file), "-o", str(serial)])
        result = runner.invoke(main, ["sweep", "-c", str(config_file), "-o", str(parallel), "-w", "2"])

        assert result.exit_code == 0, result.output
        assert serial.read_bytes() == parallel.read_bytes()

    def test_streams_csv_to_stdout_without_out(self, runner, config_file, tmp_path):
        result = runner.invoke(main, ["sweep", "--config", str(config_file)])

        assert result.exit_code == 0, result.output
        lines = [
            line for line in result.stdout.splitlines()
            if line.startswith(("variant,", "Dz,", "Dx,"))
        ]
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 1 + 2 * 2 * 5
        assert not list(tmp_path.glob("*.meta"))

    def test_streamed_rows_match_file(self, runner, config_file, tmp_path):
        out = tmp_path / "out.csv"
        runner.invoke(main, ["sweep", "-c", str(config_file), "-o", str(out)])
        result = runner.invoke(main, ["sweep", "-c", str(config_file)])

        streamed = [
            line for line in result.stdout.splitlines()
            if line.startswith(("variant,", "Dz,", "Dx,"))
        ]
        assert streamed == out.read_text().splitlines()

    def test_replay_from_sidecar(self, runner, config_file, tmp_path):
        first, second = tmp_path / "first.csv", tmp_path / "second.csv"
        runner.invoke(main, ["sweep", "-c", str(config_file), "-o", str(first)])
        result = runner.invoke(main, ["sweep", "-c", str(tmp_path / "first.csv.meta"), "-o", str(second)])

        assert result.exit_code == 0, result.output
        assert first.read_bytes() == second.read_bytes()
        assert read_metadata(tmp_path / "second.csv.meta")["config"] == \
            read_metadata(tmp_path / "first.csv.meta")["config"]

    def test_missing_config(self, runner, tmp_path):
        result = runner.invoke(main, ["sweep", "-c", str(tmp_path / "nope.json"), "-o", str(tmp_path / "o.csv")])
        assert result.exit_code == 1
        assert "File not found" in result.output

    def test_invalid_config(self, runner, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"model": {}}))
        result = runner.invoke(main, ["sweep", "-c", str(path), "-o", str(tmp_path / "o.csv")])
        assert result.exit_code == 1
        assert "Missing required keys" in result.output

    def test_invalid_workers(self, runner, config_file, tmp_path):
        result = runner.invoke(main, ["sweep", "-c", str(config_file), "-o", str(tmp_path / "o.csv"), "-w", "0"])
        assert result.exit_code == 1


class TestFigureCommand:
    """Test `figure` and `recipes`."""

    def test_recipes_listed(self, runner):
        result = runner.invoke(main, ["recipes"])
        assert result.exit_code == 0
        assert "fig1a" in result.output
        assert "fig11" in result.output

    def test_unknown_figure(self, runner, tmp_path):
        result = runner.invoke(main, ["figure", "fig99", "--out", str(tmp_path / "f.csv")])
        assert result.exit_code == 1
        assert "Unknown figure recipe" in result.output

    def test_unknown_figure_without_out(self, runner):
        result = runner.invoke(main, ["figure", "nosuchfig"])
        assert result.exit_code == 1
        assert "Unknown figure recipe" in result.output

    def test_asymptotic_figure_with_workbook(self, runner, tmp_path):
        out, xlsx = tmp_path / "fig10a.csv", tmp_path / "fig10a.xlsx"
        result = runner.invoke(main, ["figure", "fig10a", "--out", str(out), "--xlsx", str(xlsx)])

        assert result.exit_code == 0, result.output
        frame = pd.read_csv(out)
        assert len(frame) == 61 * 5
        assert frame["t"].isna().all()
        assert frame["F_asymptotic"].between(0, 1).all()

        meta = read_metadata(tmp_path / "fig10a.csv.meta")
        assert meta["recipe"] == "fig10a"
        assert "assumption.alpha" in meta
        assert load_workbook(xlsx)["Data"].max_row == 61 * 5 + 1


class TestCheckCommand:
    """Test `check` exit codes."""

    def test_failed_criterion_exits_2(self, runner, monkeypatch):
        monkeypatch.setattr("src.main.run_acceptance", lambda: [
            CheckResult(1, "stationary concurrence", True, "ok"),
            CheckResult(2, "Dx Bell-state stationarity", False, "|C - 1| = 0.5"),
        ])
        result = runner.invoke(main, ["check"])
        assert result.exit_code == 2
        assert "[FAIL]" in result.output
        assert "1/2 criteria passed" in result.output

    def test_all_pass(self, runner, monkeypatch):
        monkeypatch.setattr("src.main.run_acceptance", lambda: [
            CheckResult(1, "stationary concurrence", True, "ok"),
        ])
        result = runner.invoke(main, ["check"])
        assert result.exit_code == 0
        assert "1/1 criteria passed" in result.output


class TestOracleCommand:
    """Test `oracle`."""

    def test_small_config_agrees(self, runner, config_file):
        result = runner.invoke(main, ["oracle", "--config", str(config_file)])
        assert result.exit_code == 0, result.output
        assert "Points compared:   20" in result.output

    def test_loose_step_fails(self, runner, config_file):
        result = runner.invoke(main, ["oracle", "-c", str(config_file), "--dt", "0.25", "--tolerance", "1e-12"])
        assert result.exit_code == 2

    def test_non_positive_tolerance(self, runner, config_file):
        result = runner.invoke(main, ["oracle", "-c", str(config_file), "--tolerance", "0"])
        assert result.exit_code == 1
