"""Tests for check report building and rendering."""

from __future__ import annotations

import json

import pytest
from pydantic import ValidationError

from metafib.models.types import CheckFailure, CheckReport
from metafib.verify.reports import ReportBuilder, render_json, render_text


def test_builder_keeps_first_failure() -> None:
    """Only the first failing expectation is recorded."""
    builder = ReportBuilder(name="demo", lo=1, hi=10)
    assert builder.expect(index=1, expected=2, actual=2, detail="ok")
    assert not builder.expect(index=3, expected=4, actual=5, detail="first")
    builder.fail(index=7, expected=0, actual=1, detail="second")
    report = builder.build(note="n")
    assert not report.passed
    assert report.first_failure == CheckFailure(index=3, expected=4, actual=5, detail="first")
    assert report.range_checked == (1, 10)


def test_passed_must_match_failure() -> None:
    """A report cannot claim success while carrying a failure."""
    with pytest.raises(ValidationError):
        CheckReport(
            name="bad",
            range_checked=(1, 2),
            passed=True,
            first_failure=CheckFailure(index=1, expected=1, actual=2),
        )
    with pytest.raises(ValidationError):
        CheckReport(name="bad", range_checked=(1, 2), passed=False)


def test_render_text_and_json() -> None:
    """Text output aligns PASS/FAIL lines; JSON is an array of records."""
    ok = ReportBuilder(name="short", lo=1, hi=5).build()
    bad_builder = ReportBuilder(name="a-longer-name", lo=2, hi=9)
    bad_builder.fail(index=4, expected=1, actual=0, detail="value")
    bad = bad_builder.build(note="extra")

    text = render_text([ok, bad])
    lines = text.splitlines()
    assert lines[0].startswith("PASS  short          [1, 5]")
    assert lines[1] == (
        "FAIL  a-longer-name  [2, 9]  at n=4: expected 1, got 0 (value)  -- extra"
    )
    assert render_text([]) == ""

    records = json.loads(render_json([ok, bad]))
    assert [rec["name"] for rec in records] == ["short", "a-longer-name"]
    assert records[1]["first_failure"]["index"] == 4
    assert records[0]["first_failure"] is None
