"""Tests for the generic slow-spot checks."""

from __future__ import annotations

from metafib.recursion.engine import SequenceTable, evaluate
from metafib.recursion.spec import parse_spec
from metafib.verify.theorems import THEOREM_PRESETS, check_spot_theorems, run_theorem_suite

REPORT_SUFFIXES = ("slow-generations", "interval-structure", "endpoint-mapping", "minimal-start")


def test_conway_mother_spot(conway_table: SequenceTable) -> None:
    """All four results hold for Conway's mother spot."""
    reports = check_spot_theorems(conway_table, 1)
    assert [rep.name.rsplit("/", 1)[-1] for rep in reports] == list(REPORT_SUFFIXES)
    assert all(rep.passed for rep in reports), [rep.first_failure for rep in reports]
    assert all(rep.note is None for rep in reports)


def test_label_prefixes_report_names(conway_table: SequenceTable) -> None:
    """Report names start with the label and spot."""
    reports = check_spot_theorems(conway_table, 2, label="conway")
    assert reports[0].name == "conway/p2/slow-generations"


def test_non_slow_spot_is_skipped() -> None:
    """Q's spots are not slow, so the premise fails and reports carry a note."""
    table = evaluate(parse_spec("q"), 2000)
    reports = check_spot_theorems(table, 1)
    assert len(reports) == 4
    assert all(rep.passed for rep in reports)
    assert all(rep.note == "spot is not slow; premise not met" for rep in reports)


def test_small_grytczuk_table() -> None:
    """The results hold for a three-fold composition over a short horizon."""
    table = evaluate(parse_spec("grytczuk:3"), 5000)
    for p in (1, 2):
        reports = check_spot_theorems(table, p)
        assert all(rep.passed for rep in reports), [rep.first_failure for rep in reports]


def test_theorem_suite_has_no_failures() -> None:
    """Every slow spot of every preset satisfies all four results up to 2^18."""
    reports = run_theorem_suite(1 << 18)
    assert len(reports) == 4 * 2 * len(THEOREM_PRESETS)
    failures = [(rep.name, rep.first_failure) for rep in reports if not rep.passed]
    assert failures == []
    checked = [rep for rep in reports if rep.note is None]
    assert any(rep.name.startswith("conolly/p1/") for rep in checked)
    assert any(rep.name.startswith("v/p2/") for rep in checked)
