"""Generic checks of the slow-spot results on any computed table."""

from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np

from metafib.generations.genseq import (
    first_non_slow,
    generation_sequence,
    is_slow,
    partition,
    spot_trace,
)
from metafib.models.types import CheckReport
from metafib.recursion.engine import SequenceTable, evaluate
from metafib.recursion.spec import parse_spec, spot_count
from metafib.verify.reports import ReportBuilder

logger = logging.getLogger(__name__)

DEFAULT_THEOREM_HORIZON = 1 << 18

THEOREM_PRESETS: tuple[str, ...] = (
    "conolly",
    "conway",
    "newman:2",
    "newman:3",
    "newman:4",
    "grytczuk:2",
    "grytczuk:3",
    "grytczuk:4",
    "v",
)

_NOT_SLOW = "spot is not slow; premise not met"


def check_spot_theorems(
    table: SequenceTable,
    p: int,
    *,
    label: str | None = None,
) -> list[CheckReport]:
    """Check the slow-spot results for spot p of a table.

    Reports, in order: the slow spot gives a slow generation sequence; the generations
    form intervals with beta(g) = alpha(g+1) - 1; the spot maps the endpoints of
    generation g+1 onto those of generation g (alpha for g >= 2, beta for g >= 1); and
    alpha(2) = r + 1 with alpha(g+1) the smallest n having S_p(n) = alpha(g).
    If the spot is not slow every report passes with a note.

    Args:
        table: Computed table.
        p: Spot index.
        label: Prefix for report names (defaults to the canonical spec).

    Returns:
        Four reports.
    """
    prefix = f"{label or table.spec}/p{p}"
    r = table.spec.r
    last = table.computed_len
    trace = spot_trace(table, p)
    gens = generation_sequence(trace, r)

    slow_gens = ReportBuilder(name=f"{prefix}/slow-generations", lo=1, hi=last)
    intervals = ReportBuilder(name=f"{prefix}/interval-structure", lo=1, hi=last)
    endpoints = ReportBuilder(name=f"{prefix}/endpoint-mapping", lo=1, hi=last)
    minimal = ReportBuilder(name=f"{prefix}/minimal-start", lo=1, hi=last)
    builders = (slow_gens, intervals, endpoints, minimal)

    if last <= r + 1 or not is_slow(trace.values, r + 1, last):
        return [b.build(note=_NOT_SLOW) for b in builders]

    bad = first_non_slow(gens.values, 1, last)
    if bad is not None:
        slow_gens.fail(
            index=bad,
            expected=int(gens.values[bad - 1]),
            actual=int(gens.values[bad]),
            detail="M_p is not slow",
        )

    part = partition(gens)
    records = part.records
    spots = trace.values
    for rec in part.complete_records:
        if rec.fragmented:
            intervals.fail(
                index=rec.alpha,
                expected=rec.beta - rec.alpha + 1,
                actual=rec.size,
                detail=f"generation {rec.g} is fragmented",
            )
        nxt = part.generation(rec.g + 1)
        if nxt is not None:
            intervals.expect(
                index=rec.beta,
                expected=nxt.alpha - 1,
                actual=rec.beta,
                detail=f"beta({rec.g}) = alpha({rec.g + 1}) - 1",
            )

    for prev, cur in zip(records, records[1:], strict=False):
        if prev.g >= 2:
            endpoints.expect(
                index=cur.alpha,
                expected=prev.alpha,
                actual=int(spots[cur.alpha]),
                detail=f"S_p(alpha({cur.g})) = alpha({prev.g})",
            )
        if cur.complete:
            endpoints.expect(
                index=cur.beta,
                expected=prev.beta,
                actual=int(spots[cur.beta]),
                detail=f"S_p(beta({cur.g})) = beta({prev.g})",
            )

    if len(records) >= 2:
        minimal.expect(
            index=2,
            expected=r + 1,
            actual=records[1].alpha,
            detail="alpha(2) = r + 1",
        )
    tail = spots[r + 1 :]
    for prev, cur in zip(records[1:], records[2:], strict=False):
        pos = int(np.searchsorted(tail, prev.alpha, side="left"))
        first = r + 1 + pos if pos < tail.shape[0] and int(tail[pos]) == prev.alpha else 0
        minimal.expect(
            index=cur.g,
            expected=first,
            actual=cur.alpha,
            detail=f"alpha({cur.g}) is the first n with S_p(n) = alpha({prev.g})",
        )

    return [b.build() for b in builders]


def run_theorem_suite(
    horizon: int = DEFAULT_THEOREM_HORIZON,
    presets: Sequence[str] = THEOREM_PRESETS,
) -> list[CheckReport]:
    """Evaluate each preset and check every spot.

    Args:
        horizon: Number of terms per preset.
        presets: Spec texts to check.

    Returns:
        Reports for every preset and spot, in order.
    """
    reports: list[CheckReport] = []
    for text in presets:
        spec = parse_spec(text)
        table = evaluate(spec, horizon)
        if table.terminated_at is not None:
            logger.warning(
                "Preset terminated before horizon",
                extra={"spec": text, "terminated_at": table.terminated_at},
            )
        for p in range(1, spot_count(spec) + 1):
            reports.extend(check_spot_theorems(table, p, label=text))
    return reports
