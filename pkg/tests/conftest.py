"""Shared fixtures: tables that are expensive enough to build once per session."""

from __future__ import annotations

import pytest

from metafib.recursion.engine import SequenceTable, evaluate
from metafib.recursion.spec import parse_spec

Q_HORIZON = 10**6


@pytest.fixture(scope="session")
def q_table() -> SequenceTable:
    """Hofstadter's Q-sequence to one million terms."""
    return evaluate(parse_spec("q"), Q_HORIZON)


@pytest.fixture(scope="session")
def conway_table() -> SequenceTable:
    """Conway's sequence to 1024 terms."""
    return evaluate(parse_spec("conway"), 1024)


@pytest.fixture(scope="session")
def conolly_table() -> SequenceTable:
    """Conolly's sequence to 2^18 terms."""
    return evaluate(parse_spec("conolly"), 1 << 18)
