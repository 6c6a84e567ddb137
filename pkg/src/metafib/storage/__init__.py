"""Persistence: versioned table cache and CSV/JSON exports."""

from __future__ import annotations
