"""Configuration loading (Pydantic Settings)."""

from __future__ import annotations
