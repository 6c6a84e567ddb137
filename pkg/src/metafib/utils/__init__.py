"""Shared utilities (digests, logging)."""

from __future__ import annotations
