"""CSV and JSON exports of sequence series and the Q comparison table."""

from __future__ import annotations

import csv
import io
import json
import logging
from pathlib import Path
from typing import Any

from metafib.generations.genseq import generation_partition
from metafib.models.types import OutputFormat, SeriesKind
from metafib.qseq.analysis import (
    COMPARISON_HEADER,
    ComparisonTable,
    comparison_csv,
    comparison_records,
    trend_deviation,
)
from metafib.recursion.engine import SequenceTable
from metafib.recursion.spec import spot_count
from metafib.storage.files import write_atomic

logger = logging.getLogger(__name__)

SERIES_HEADERS: dict[SeriesKind, tuple[str, ...]] = {
    SeriesKind.values: ("n", "value"),
    SeriesKind.trend_deviation: ("n", "trend_deviation"),
    SeriesKind.generation_marks: ("g", "alpha", "beta"),
}


def series_rows(
    table: SequenceTable,
    kind: SeriesKind,
    *,
    spot: int = 1,
    start: int = 1,
    stop: int | None = None,
) -> list[tuple[int, ...]]:
    """Return the rows of one exported series.

    The selection [start, stop] ranges over n for value series and over g for
    generation marks; stop defaults to the last available row.

    Args:
        table: Computed table.
        kind: Series to export.
        spot: Spot index for generation marks.
        start: First selected n (or g).
        stop: Last selected n (or g), inclusive.

    Returns:
        Rows in ascending order, matching ``SERIES_HEADERS[kind]``.

    Raises:
        ValueError: If the spot is out of range or the selection is empty.
    """
    if kind is SeriesKind.generation_marks:
        if not 1 <= spot <= spot_count(table.spec):
            raise ValueError(f"spot {spot} outside [1, {spot_count(table.spec)}]")
        records = generation_partition(table, spot).records
        last = len(records) if stop is None else min(stop, len(records))
        rows: list[tuple[int, ...]] = [
            (rec.g, rec.alpha, rec.beta) for rec in records if start <= rec.g <= last
        ]
    else:
        last = table.computed_len if stop is None else min(stop, table.computed_len)
        lo = max(start, 1)
        series = table.values if kind is SeriesKind.values else trend_deviation(table)
        rows = [(n, int(v)) for n, v in enumerate(series[lo : last + 1].tolist(), start=lo)]
    if not rows:
        raise ValueError(f"empty selection [{start}, {stop}] for {kind.value}")
    return rows


def _render_csv(header: tuple[str, ...], rows: list[tuple[int, ...]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _render_json(records: list[dict[str, Any]]) -> str:
    return json.dumps(records, indent=2) + "\n"


def render_series(
    table: SequenceTable,
    kind: SeriesKind,
    fmt: OutputFormat,
    *,
    spot: int = 1,
    start: int = 1,
    stop: int | None = None,
) -> str:
    """Render a series as CSV (one header row) or as a JSON array of records."""
    header = SERIES_HEADERS[kind]
    rows = series_rows(table, kind, spot=spot, start=start, stop=stop)
    if fmt is OutputFormat.csv:
        return _render_csv(header, rows)
    return _render_json([dict(zip(header, row, strict=True)) for row in rows])


def export_series(
    table: SequenceTable,
    kind: SeriesKind,
    path: Path,
    fmt: OutputFormat,
    *,
    spot: int = 1,
    start: int = 1,
    stop: int | None = None,
) -> None:
    """Write a series to path.

    Args:
        table: Computed table.
        kind: Series to export.
        path: Output file.
        fmt: CSV or JSON.
        spot: Spot index for generation marks.
        start: First selected n (or g).
        stop: Last selected n (or g), inclusive.

    Raises:
        ValueError: If the selection is empty or the spot is out of range.
        OSError: If the path is not writable.
    """
    text = render_series(table, kind, fmt, spot=spot, start=start, stop=stop)
    write_atomic(path, text.encode("utf-8"))
    logger.info(
        "Exported series",
        extra={"path": str(path), "kind": kind.value, "format": fmt.value},
    )


def render_comparison(comparison: ComparisonTable, fmt: OutputFormat) -> str:
    """Render the Q comparison table as CSV or as a JSON array of records."""
    if fmt is OutputFormat.csv:
        return comparison_csv(comparison)
    records = comparison_records(comparison)
    return _render_json([{key: rec[key] for key in COMPARISON_HEADER} for rec in records])


def export_comparison(comparison: ComparisonTable, path: Path, fmt: OutputFormat) -> None:
    """Write the Q comparison table to path.

    Raises:
        OSError: If the path is not writable.
    """
    write_atomic(path, render_comparison(comparison, fmt).encode("utf-8"))
    logger.info("Exported comparison", extra={"path": str(path), "format": fmt.value})
