"""Recursion specifications and their memoized evaluation."""

from __future__ import annotations
