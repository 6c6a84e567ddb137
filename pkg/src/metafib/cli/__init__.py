"""CLI entrypoints for metafib."""

from __future__ import annotations

from metafib.cli.app import app, run

__all__ = ["app", "run"]
