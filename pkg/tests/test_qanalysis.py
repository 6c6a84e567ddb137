"""Tests for the Q-sequence start-point comparison and transition detection."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from metafib.generations.genseq import generation_partition
from metafib.models.types import TransitionParams
from metafib.qseq.analysis import (
    build_comparison,
    calibrate_transitions,
    check_early_doubling,
    comparison_csv,
    comparison_text,
    detect_transitions,
    deviation,
    format_percent,
    hits_targets,
    trend_deviation,
)
from metafib.qseq.pinn import PINN_TABULATED, pinn_start
from metafib.recursion.engine import SequenceTable
from metafib.recursion.spec import parse_spec

MATERNAL_STARTS = [
    1, 3, 6, 12, 24, 48, 96, 192, 384, 768,
    1522, 3031, 6043, 12056, 24086, 48043, 95286, 189268, 376996, 750285,
]  # fmt: skip
PINN_STARTS = [
    1, 3, 6, 12, 23, 48, 96, 192, 384, 768,
    1522, 2896, 5792, 11585, 23170, 46340, 92681, 185363, 370727, 741455,
]  # fmt: skip
DEVIATIONS = {
    12: ("9.48", "0.68"),
    13: ("1.52", "0.48"),
    14: ("1.00", "0.22"),
    15: ("5.72", "0.46"),
    16: ("0.42", "1.00"),
    17: ("2.60", "0.36"),
    18: ("1.73", "0.28"),
}
TRANSITIONS = [3032, 6042, 12069, 24064]


def _synthetic(values: list[int]) -> SequenceTable:
    arr = np.asarray([0, *values], dtype=np.int64)
    arr.flags.writeable = False
    return SequenceTable(spec=parse_spec("q"), values=arr)


def test_pinn_start_points() -> None:
    """Tabulated for g <= 11, floor(2^(g - 1/2)) afterwards."""
    assert [pinn_start(g) for g in range(1, 21)] == PINN_STARTS
    assert len(PINN_TABULATED) == 11
    with pytest.raises(ValueError):
        pinn_start(0)


def test_maternal_start_points(q_table: SequenceTable) -> None:
    """Maternal generation start points of Q up to g = 20."""
    part = generation_partition(q_table, 1)
    assert [part.records[g - 1].alpha for g in range(1, 21)] == MATERNAL_STARTS


def test_deviation_and_rounding(q_table: SequenceTable) -> None:
    """Deviations are exact percentages rounded half up to two decimals."""
    assert deviation(q_table, 24) == Fraction(100, 3)
    assert format_percent(Fraction(100, 3)) == "33.33"
    assert format_percent(Fraction(1, 200)) == "0.01"
    assert format_percent(Fraction(12)) == "12.00"
    assert format_percent(None) == ""
    with pytest.raises(ValueError):
        deviation(q_table, 1)


def test_comparison_table(q_table: SequenceTable) -> None:
    """Start points and deviations for g = 1..20 match the published comparison."""
    comparison = build_comparison(q_table, 20, TransitionParams())
    rows = comparison.rows
    assert [row.alpha_maternal for row in rows] == MATERNAL_STARTS
    assert [row.alpha_pinn for row in rows] == PINN_STARTS
    assert rows[0].dev_maternal is None
    for g, (maternal, pinn) in DEVIATIONS.items():
        row = rows[g - 1]
        assert format_percent(row.dev_maternal) == maternal, g
        assert format_percent(row.dev_pinn) == pinn, g
    mismatched = [row.g for row in rows[:11] if not row.start_points_match]
    assert mismatched == [5]


def test_comparison_rendering(q_table: SequenceTable) -> None:
    """CSV has one header row; text flags the tabulated mismatch."""
    head = q_table.head(200_000)
    comparison = build_comparison(head, 15, TransitionParams())
    csv_text = comparison_csv(comparison)
    lines = csv_text.splitlines()
    assert lines[0] == "g,alpha_maternal,alpha_pinn,dev_maternal_pct,dev_pinn_pct,transition"
    assert len(lines) == 16
    assert lines[12].startswith("12,3031,2896,9.48,0.68,")
    assert lines[1].startswith("1,1,1,,,")
    text = comparison_text(comparison)
    assert "(g = 5)" in text
    assert csv_text == comparison_csv(build_comparison(head, 15, TransitionParams()))


def test_comparison_needs_generation(q_table: SequenceTable) -> None:
    """Asking for a generation beyond the horizon is an argument error."""
    with pytest.raises(ValueError):
        build_comparison(q_table.head(5000), 15, TransitionParams())
    with pytest.raises(ValueError):
        build_comparison(q_table, 0, TransitionParams())


def test_trend_deviation() -> None:
    """trend_deviation is 2T(n) - n."""
    table = _synthetic([1, 1, 2, 3, 3, 4])
    assert trend_deviation(table)[1:].tolist() == [1, 0, 1, 2, 1, 2]


def test_detect_transitions_on_synthetic_series() -> None:
    """A spike after a long quiet run is reported at its first index."""
    values = [(n + 1) // 2 for n in range(1, 2001)]
    values[1499] += 30
    table = _synthetic(values)
    assert detect_transitions(table, TransitionParams()) == [1500]
    assert detect_transitions(table, TransitionParams(window=2000)) == []
    with pytest.raises(ValueError):
        detect_transitions(table, TransitionParams(window=2001))


def test_hits_targets() -> None:
    """Each target needs a transition within the relative tolerance."""
    assert hits_targets([100, 205], [101, 200], tolerance=0.03)
    assert not hits_targets([100, 205], [101, 200], tolerance=0.01)
    assert not hits_targets([], [10])


def test_default_detector_recovers_published_points(q_table: SequenceTable) -> None:
    """The default parameters place the g = 12..15 transitions within 1 %."""
    found = detect_transitions(q_table.head(200_000), TransitionParams())
    assert hits_targets(found, TRANSITIONS, tolerance=0.01), found


def test_calibration_keeps_working_defaults(q_table: SequenceTable) -> None:
    """Calibration returns the defaults when they already meet the tolerance."""
    head = q_table.head(200_000)
    assert calibrate_transitions(head, TRANSITIONS, tolerance=0.01) == TransitionParams()
    nominal = TransitionParams(window=64, quiet_threshold=0.004, spike_factor=0.02)
    params = calibrate_transitions(head, TRANSITIONS, tolerance=0.01, first=nominal)
    assert params == TransitionParams()


def test_early_doubling(q_table: SequenceTable) -> None:
    """Start points double through g = 10 and the doubling breaks at g = 11."""
    report = check_early_doubling(q_table)
    assert report.passed, report.first_failure
    assert report.note == "doubling breaks at g=11: alpha=1522, doubled=1536"


def test_early_doubling_needs_enough_terms(q_table: SequenceTable) -> None:
    """The horizon must reach the last checked start point."""
    with pytest.raises(ValueError):
        check_early_doubling(q_table.head(100))
