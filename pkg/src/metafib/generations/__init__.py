"""Spot-based generation structures."""

from __future__ import annotations
