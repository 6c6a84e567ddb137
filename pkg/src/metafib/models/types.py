"""Shared enums and lightweight Pydantic models."""

from __future__ import annotations

from enum import StrEnum
from typing import Annotated, Self

from pydantic import Field, model_validator

from metafib.models.base import AppModel, FrozenModel


class SeriesKind(StrEnum):
    """Data series that can be exported from a computed table."""

    values = "values"
    trend_deviation = "trend_deviation"
    generation_marks = "generation_marks"


class OutputFormat(StrEnum):
    """File formats for exported series and tables."""

    csv = "csv"
    json = "json"


class ReportFormat(StrEnum):
    """Renderings of check reports on stdout."""

    text = "text"
    json = "json"


class TableFormat(StrEnum):
    """Renderings of the Q comparison table."""

    text = "text"
    csv = "csv"
    json = "json"


class VerifySuite(StrEnum):
    """Named verification suites exposed by the CLI."""

    conolly = "conolly"
    conway = "conway"
    newman = "newman"
    grytczuk = "grytczuk"
    mu = "mu"
    theorems = "theorems"


class TransitionParams(FrozenModel):
    """Parameters of the quiet-region / spike transition detector.

    The defaults come from `calibrate_transitions` on Q(1..200000): they place the
    transitions of generations 12 to 15 (3032, 6042, 12069, 24064) within one percent.
    The nominal 64 / 0.004 / 0.02 finds only 24070 and 48035 there.
    """

    window: Annotated[int, Field(ge=2)] = 16
    quiet_threshold: Annotated[float, Field(gt=0)] = 0.006
    spike_factor: Annotated[float, Field(gt=0)] = 0.005


class CheckFailure(AppModel):
    """First point at which a checked claim did not hold."""

    index: int
    expected: int
    actual: int
    detail: str = ""


class CheckReport(AppModel):
    """Outcome of one numeric check over a finite horizon."""

    name: Annotated[str, Field(min_length=1)]
    range_checked: tuple[int, int]
    passed: bool
    first_failure: CheckFailure | None = None
    note: str | None = None

    @model_validator(mode="after")
    def _passed_matches_failure(self) -> Self:
        """Ensure `passed` is consistent with the recorded failure.

        Returns:
            The validated report.

        Raises:
            ValueError: If `passed` disagrees with `first_failure`.
        """
        if self.passed != (self.first_failure is None):
            raise ValueError("passed must be true exactly when first_failure is absent")
        return self
