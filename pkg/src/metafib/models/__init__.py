"""Validated domain models (Pydantic)."""

from __future__ import annotations

from metafib.models.types import (
    CheckFailure,
    CheckReport,
    OutputFormat,
    ReportFormat,
    SeriesKind,
    TableFormat,
    TransitionParams,
    VerifySuite,
)

__all__ = [
    "CheckFailure",
    "CheckReport",
    "OutputFormat",
    "ReportFormat",
    "SeriesKind",
    "TableFormat",
    "TransitionParams",
    "VerifySuite",
]
