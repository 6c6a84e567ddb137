"""Hofstadter Q-sequence generation analysis."""

from __future__ import annotations
