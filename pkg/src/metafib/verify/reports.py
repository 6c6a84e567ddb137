"""Building and rendering check reports."""

from __future__ import annotations

import json
import logging
from collections.abc import Sequence

from metafib.models.types import CheckFailure, CheckReport

logger = logging.getLogger(__name__)


class ReportBuilder:
    """Accumulates expectations for one named check; keeps only the first failure."""

    def __init__(self, *, name: str, lo: int, hi: int) -> None:
        """Initialize the builder.

        Args:
            name: Check name shown in reports.
            lo: First index of the checked range.
            hi: Last index of the checked range.
        """
        self._name = name
        self._lo = lo
        self._hi = hi
        self._failure: CheckFailure | None = None

    @property
    def failed(self) -> bool:
        """Return whether a failure has been recorded."""
        return self._failure is not None

    def fail(self, *, index: int, expected: int, actual: int, detail: str) -> None:
        """Record a failure unless an earlier one is already recorded."""
        if self._failure is None:
            self._failure = CheckFailure(
                index=index,
                expected=expected,
                actual=actual,
                detail=detail,
            )

    def expect(self, *, index: int, expected: int, actual: int, detail: str) -> bool:
        """Compare two integers, recording a failure if they differ.

        Returns:
            True if the values are equal.
        """
        if expected == actual:
            return True
        self.fail(index=index, expected=expected, actual=actual, detail=detail)
        return False

    def build(self, *, note: str | None = None) -> CheckReport:
        """Return the finished report."""
        report = CheckReport(
            name=self._name,
            range_checked=(self._lo, self._hi),
            passed=self._failure is None,
            first_failure=self._failure,
            note=note,
        )
        if not report.passed:
            logger.warning(
                "Check failed",
                extra={"check": report.name, "failure": report.model_dump(mode="json")},
            )
        return report


def render_text(reports: Sequence[CheckReport]) -> str:
    """Render reports as aligned human-readable lines."""
    if not reports:
        return ""
    width = max(len(rep.name) for rep in reports)
    lines: list[str] = []
    for rep in reports:
        status = "PASS" if rep.passed else "FAIL"
        lo, hi = rep.range_checked
        line = f"{status}  {rep.name:<{width}}  [{lo}, {hi}]"
        if rep.first_failure is not None:
            f = rep.first_failure
            line += f"  at n={f.index}: expected {f.expected}, got {f.actual}"
            if f.detail:
                line += f" ({f.detail})"
        if rep.note:
            line += f"  -- {rep.note}"
        lines.append(line)
    return "\n".join(lines)


def render_json(reports: Sequence[CheckReport]) -> str:
    """Render reports as a JSON array of records with fixed field order."""
    return json.dumps([rep.model_dump(mode="json") for rep in reports], indent=2)
