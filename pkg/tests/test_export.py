"""Tests for CSV/JSON series and comparison exports."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from metafib.models.types import OutputFormat, SeriesKind, TransitionParams
from metafib.qseq.analysis import build_comparison
from metafib.recursion.engine import SequenceTable, evaluate
from metafib.recursion.spec import parse_spec
from metafib.storage.export import export_comparison, export_series, series_rows
from metafib.utils.digest import sha256_file_hex


def test_values_csv(conway_table: SequenceTable, tmp_path: Path) -> None:
    """Values export has one header row and one row per index."""
    path = tmp_path / "conway.csv"
    export_series(conway_table, SeriesKind.values, path, OutputFormat.csv)
    lines = path.read_text(encoding="utf-8").split("\n")
    assert lines[0] == "n,value"
    assert lines[1:5] == ["1,1", "2,1", "3,2", "4,2"]
    assert lines[1024] == "1024,512"
    assert lines[-1] == ""
    assert len(lines) == 1026
    assert b"\r" not in path.read_bytes()


def test_q_first_800_as_json(tmp_path: Path) -> None:
    """JSON export is an array of records in index order."""
    table = evaluate(parse_spec("q"), 800)
    path = tmp_path / "q.json"
    export_series(table, SeriesKind.values, path, OutputFormat.json)
    records = json.loads(path.read_text(encoding="utf-8"))
    assert len(records) == 800
    assert records[0] == {"n": 1, "value": 1}
    assert records[23] == {"n": 24, "value": 16}
    assert [rec["value"] for rec in records] == table.terms.tolist()


def test_trend_deviation_rows() -> None:
    """Trend deviation rows are (n, 2T(n) - n)."""
    table = evaluate(parse_spec("q"), 6)
    rows = series_rows(table, SeriesKind.trend_deviation)
    assert rows == [(1, 1), (2, 0), (3, 1), (4, 2), (5, 1), (6, 2)]


def test_generation_marks(conway_table: SequenceTable, tmp_path: Path) -> None:
    """Generation marks list (g, alpha, beta) for the chosen spot."""
    rows = series_rows(conway_table, SeriesKind.generation_marks, spot=1)
    assert rows[:3] == [(1, 1, 2), (2, 3, 4), (3, 5, 8)]
    assert rows[-1] == (10, 513, 1024)
    path = tmp_path / "marks.csv"
    export_series(conway_table, SeriesKind.generation_marks, path, OutputFormat.csv, start=9)
    assert path.read_text(encoding="utf-8") == "g,alpha,beta\n9,257,512\n10,513,1024\n"


def test_selection_range(conway_table: SequenceTable) -> None:
    """start and stop select an inclusive window."""
    rows = series_rows(conway_table, SeriesKind.values, start=5, stop=8)
    assert rows == [(5, 3), (6, 4), (7, 4), (8, 4)]


def test_empty_selection_is_rejected(conway_table: SequenceTable, tmp_path: Path) -> None:
    """An empty selection is an argument error and writes nothing."""
    path = tmp_path / "empty.csv"
    with pytest.raises(ValueError):
        export_series(conway_table, SeriesKind.values, path, OutputFormat.csv, start=2000)
    with pytest.raises(ValueError):
        series_rows(conway_table, SeriesKind.generation_marks, start=11)
    with pytest.raises(ValueError):
        series_rows(conway_table, SeriesKind.generation_marks, spot=3)
    assert not path.exists()


def test_exports_are_byte_identical(tmp_path: Path) -> None:
    """Repeated exports of the same input produce identical files."""
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    export_series(evaluate(parse_spec("mu"), 3000), SeriesKind.values, first, OutputFormat.json)
    export_series(evaluate(parse_spec("mu"), 3000), SeriesKind.values, second, OutputFormat.json)
    assert sha256_file_hex(first) == sha256_file_hex(second)


def test_export_comparison(q_table: SequenceTable, tmp_path: Path) -> None:
    """The comparison exports as CSV with percentages or as JSON records."""
    comparison = build_comparison(q_table.head(50_000), 13, TransitionParams())
    csv_path = tmp_path / "cmp.csv"
    json_path = tmp_path / "cmp.json"
    export_comparison(comparison, csv_path, OutputFormat.csv)
    export_comparison(comparison, json_path, OutputFormat.json)
    assert csv_path.read_text(encoding="utf-8").splitlines()[13].startswith(
        "13,6043,5792,1.52,0.48,",
    )
    records = json.loads(json_path.read_text(encoding="utf-8"))
    assert records[4]["alpha_pinn"] == 23
    assert records[4]["alpha_maternal"] == 24
    assert records[11]["dev_maternal_pct"] == "9.48"
    assert records[0]["dev_maternal_pct"] is None
