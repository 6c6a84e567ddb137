"""Tests for the Typer CLI."""

from __future__ import annotations

import json
import logging
from collections.abc import Iterator
from pathlib import Path

import pytest
from typer.testing import CliRunner

import metafib.cli.app as cli_app
from metafib.cli.app import app, run
from metafib.models.types import CheckFailure, CheckReport

runner = CliRunner()


@pytest.fixture(autouse=True)
def _isolated(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Iterator[None]:
    """Run each command in an empty directory with a private cache location."""
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("METAFIB_CACHE__DIR", str(tmp_path / "cache"))
    yield
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)


def test_eval_prints_summary() -> None:
    """eval prints the canonical spec, the computed length, and the first values."""
    result = runner.invoke(app, ["eval", "conway", "-n", "16", "--show", "8"])
    assert result.exit_code == 0, result.output
    assert "spec: conway:1;ic=1,1" in result.stdout
    assert "computed: 16" in result.stdout
    assert "terminated_at: -" in result.stdout
    assert "values: 1 1 2 2 3 4 4 4" in result.stdout


def test_eval_reports_termination() -> None:
    """A terminating recursion is reported, not an error."""
    result = runner.invoke(app, ["eval", "homog:0,1;ic=2", "-n", "10"])
    assert result.exit_code == 0, result.output
    assert "terminated_at: 2" in result.stdout


def test_eval_exports_and_seeds_cache(tmp_path: Path) -> None:
    """--export writes the series; --seed-cache leaves a cache file behind."""
    out = tmp_path / "q.json"
    result = runner.invoke(
        app,
        ["eval", "q", "-n", "800", "--export", str(out), "--format", "json", "--seed-cache"],
    )
    assert result.exit_code == 0, result.output
    records = json.loads(out.read_text(encoding="utf-8"))
    assert len(records) == 800
    assert list((tmp_path / "cache").glob("*.mfib"))


def test_gens_prints_conway_intervals() -> None:
    """gens lists the ten maternal intervals of Conway's sequence up to 1024."""
    result = runner.invoke(app, ["gens", "conway", "-n", "1024", "--spot", "1"])
    assert result.exit_code == 0, result.output
    assert "interval_structure=yes" in result.stdout
    rows = [line.split() for line in result.stdout.splitlines() if line[:4].strip().isdigit()]
    assert [(int(r[1]), int(r[2])) for r in rows][:3] == [(1, 2), (3, 4), (5, 8)]
    assert rows[-1][:3] == ["10", "513", "1024"]
    assert rows[-1][-1] == "incomplete"
    assert len(rows) == 10


def test_gens_rejects_bad_spot() -> None:
    """A spot beyond the spot count is a usage error."""
    result = runner.invoke(app, ["gens", "conway", "-n", "64", "--spot", "3"])
    assert result.exit_code == 2


@pytest.mark.parametrize(
    "args",
    [
        ["eval", "q", "-n", "0"],
        ["eval", "nonsense", "-n", "10"],
        ["eval", "v", "-n", "3"],
        ["frobnicate"],
        ["verify", "conolly", "-n", "100"],
        ["qreport", "-n", "5000", "--gmax", "15"],
    ],
)
def test_usage_errors_exit_2(args: list[str]) -> None:
    """Bad arguments exit with status 2."""
    assert run(args) == 2


def test_verify_conway_passes() -> None:
    """A passing suite exits 0 and prints PASS lines."""
    result = runner.invoke(app, ["verify", "conway", "--gmax", "9"])
    assert result.exit_code == 0, result.output
    assert result.stdout.startswith("PASS  conway-octaves")


def test_verify_json_format() -> None:
    """--format json prints a JSON array of reports."""
    result = runner.invoke(app, ["verify", "conolly", "--gmax", "10", "--format", "json"])
    assert result.exit_code == 0, result.output
    records = json.loads(result.stdout)
    assert records[0]["name"] == "conolly"
    assert records[0]["passed"] is True


def test_verify_failure_exits_1(monkeypatch: pytest.MonkeyPatch) -> None:
    """A failed check exits with status 1."""
    failing = CheckReport(
        name="mu",
        range_checked=(1, 50),
        passed=False,
        first_failure=CheckFailure(index=7, expected=3, actual=2, detail="tabulated value"),
    )
    monkeypatch.setattr(cli_app, "check_mu", lambda n_max: failing)
    result = runner.invoke(app, ["verify", "mu", "-n", "50"])
    assert result.exit_code == 1
    assert "FAIL  mu" in result.stdout


def test_verify_theorems_small_horizon() -> None:
    """The theorem suite runs on a small horizon."""
    result = runner.invoke(app, ["verify", "theorems", "-n", "4096"])
    assert result.exit_code == 0, result.output
    assert "conolly/p1/slow-generations" in result.stdout


def test_qreport_csv() -> None:
    """qreport prints the comparison table as CSV."""
    result = runner.invoke(app, ["qreport", "-n", "30000", "--gmax", "14", "--format", "csv"])
    assert result.exit_code == 0, result.output
    lines = result.stdout.splitlines()
    assert lines[0] == "g,alpha_maternal,alpha_pinn,dev_maternal_pct,dev_pinn_pct,transition"
    assert lines[5].startswith("5,24,23,")


def test_qreport_rejects_invalid_thresholds() -> None:
    """Transition parameters are validated."""
    result = runner.invoke(app, ["qreport", "-n", "30000", "--gmax", "14", "--quiet", "0"])
    assert result.exit_code == 2


def test_export_generation_marks(tmp_path: Path) -> None:
    """export writes generation marks for the chosen spot."""
    out = tmp_path / "marks.csv"
    result = runner.invoke(
        app,
        ["export", "conway", "-n", "64", "--kind", "generation_marks", "-o", str(out)],
    )
    assert result.exit_code == 0, result.output
    assert out.read_text(encoding="utf-8").startswith("g,alpha,beta\n1,1,2\n2,3,4\n")


def test_identical_invocations_give_identical_output() -> None:
    """stdout carries no timestamps or unstable ordering."""
    first = runner.invoke(app, ["gens", "mu", "-n", "3000"])
    second = runner.invoke(app, ["gens", "mu", "-n", "3000"])
    assert first.exit_code == 0, first.output
    assert first.stdout == second.stdout
