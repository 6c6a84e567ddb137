"""Numeric checks of the block-structure results over finite horizons."""

from __future__ import annotations
