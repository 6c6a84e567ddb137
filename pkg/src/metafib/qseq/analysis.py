"""Q-sequence study: start-point deviations, transition points, and the comparison table."""

from __future__ import annotations

import csv
import io
import itertools
import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Any

import numpy as np
import numpy.typing as npt

from metafib.generations.genseq import GenerationPartition, generation_partition
from metafib.models.types import CheckReport, TransitionParams
from metafib.qseq.pinn import PINN_TABULATED, pinn_start
from metafib.recursion.engine import IntArray, SequenceTable
from metafib.verify.reports import ReportBuilder

logger = logging.getLogger(__name__)

COMPARISON_HEADER: tuple[str, ...] = (
    "g",
    "alpha_maternal",
    "alpha_pinn",
    "dev_maternal_pct",
    "dev_pinn_pct",
    "transition",
)

CALIBRATION_WINDOWS: tuple[int, ...] = (16, 32, 64, 128, 256)
CALIBRATION_QUIET: tuple[float, ...] = (0.001, 0.002, 0.003, 0.004, 0.006, 0.008, 0.012, 0.016)
CALIBRATION_SPIKE: tuple[float, ...] = (0.005, 0.01, 0.02, 0.03, 0.05, 0.08)


@dataclass(frozen=True)
class ComparisonRow:
    """One generation of the maternal vs Pinn comparison."""

    g: int
    alpha_maternal: int
    alpha_pinn: int
    dev_maternal: Fraction | None
    dev_pinn: Fraction | None
    transition: int | None

    @property
    def start_points_match(self) -> bool:
        """Return whether the maternal and Pinn start points agree."""
        return self.alpha_maternal == self.alpha_pinn


@dataclass(frozen=True)
class ComparisonTable:
    """Per-generation comparison rows plus the transition parameters used."""

    rows: tuple[ComparisonRow, ...]
    params: TransitionParams
    horizon: int


def deviation(table: SequenceTable, idx: int) -> Fraction:
    """Return the absolute percent change |T(idx) - T(idx-1)| / T(idx-1) * 100, exactly.

    Args:
        table: Computed table.
        idx: Index with 2 <= idx <= computed_len.

    Returns:
        The deviation as an exact rational percentage.

    Raises:
        ValueError: If idx is out of range.
    """
    if not 2 <= idx <= table.computed_len:
        raise ValueError(f"index {idx} outside [2, {table.computed_len}]")
    current = int(table.values[idx])
    previous = int(table.values[idx - 1])
    return Fraction(abs(current - previous) * 100, previous)


def format_percent(value: Fraction | None) -> str:
    """Render a percentage with two decimals, rounding half up ("" for None)."""
    if value is None:
        return ""
    hundredths = floor(value * 100 + Fraction(1, 2))
    return f"{hundredths // 100}.{hundredths % 100:02d}"


def trend_deviation(table: SequenceTable) -> IntArray:
    """Return 2*T(n) - n for n in 1..computed_len (1-based, slot 0 unused)."""
    n = np.arange(table.computed_len + 1, dtype=np.int64)
    return 2 * table.values - n


def _deviation_ratio(table: SequenceTable) -> npt.NDArray[np.float64]:
    """Return |2T(n) - n| / n for n in 1..computed_len as a 0-based array."""
    n = np.arange(1, table.computed_len + 1, dtype=np.float64)
    return np.abs(trend_deviation(table)[1:]).astype(np.float64) / n


def _transitions_from_ratio(
    ratio: npt.NDArray[np.float64],
    params: TransitionParams,
) -> list[int]:
    """Find the first spike after each quiet run of at least `window` indices."""
    quiet = ratio < params.quiet_threshold
    edges = np.flatnonzero(np.diff(np.concatenate(([0], quiet.astype(np.int8), [0]))))
    starts, ends = edges[0::2], edges[1::2]
    run_ends = ends[(ends - starts) >= params.window]
    spikes = np.flatnonzero(ratio > params.spike_factor)
    if run_ends.size == 0 or spikes.size == 0:
        return []
    pos = np.searchsorted(spikes, run_ends, side="left")
    found = spikes[pos[pos < spikes.size]] + 1
    return [int(v) for v in np.unique(found)]


def detect_transitions(table: SequenceTable, params: TransitionParams) -> list[int]:
    """Locate transition points of T(n) - n/2 after quiet regions.

    A quiet region is a maximal run of at least `window` indices where
    |2T(n) - n| / n < quiet_threshold; for each, the first later index with
    |2T(n) - n| / n > spike_factor is reported.

    Args:
        table: Computed table (any spec; intended for the Q-sequence).
        params: Detector parameters.

    Returns:
        Sorted, de-duplicated transition indices (1-based).

    Raises:
        ValueError: If the window exceeds the table length.
    """
    if params.window > table.computed_len:
        raise ValueError(
            f"window {params.window} exceeds table length {table.computed_len}",
        )
    return _transitions_from_ratio(_deviation_ratio(table), params)


def hits_targets(
    transitions: Sequence[int],
    targets: Iterable[int],
    *,
    tolerance: float = 0.01,
) -> bool:
    """Return whether every target has a transition within a relative tolerance."""
    found = np.asarray(transitions, dtype=np.int64)
    for target in targets:
        if found.size == 0 or np.min(np.abs(found - target)) > tolerance * target:
            return False
    return True


def calibrate_transitions(
    table: SequenceTable,
    targets: Sequence[int],
    *,
    tolerance: float = 0.01,
    first: TransitionParams | None = None,
) -> TransitionParams | None:
    """Grid-search detector parameters that recover every target transition.

    Args:
        table: Computed table.
        targets: Expected transition indices.
        tolerance: Relative tolerance per target.
        first: Parameters tried before the grid (the defaults if omitted).

    Returns:
        The first parameters meeting the tolerance, or None.
    """
    ratio = _deviation_ratio(table)
    grid = itertools.product(CALIBRATION_WINDOWS, CALIBRATION_QUIET, CALIBRATION_SPIKE)
    candidates = itertools.chain(
        [first or TransitionParams()],
        (
            TransitionParams(window=w, quiet_threshold=q, spike_factor=s)
            for w, q, s in grid
            if w <= table.computed_len
        ),
    )
    for params in candidates:
        if hits_targets(_transitions_from_ratio(ratio, params), targets, tolerance=tolerance):
            logger.info("Calibrated transition detector", extra=params.model_dump())
            return params
    return None


def _nearest(candidates: Sequence[int], lo: int, hi: int, anchor: int) -> int | None:
    """Return the candidate in (lo, hi] closest to anchor (earlier wins ties)."""
    inside = [c for c in candidates if lo < c <= hi]
    if not inside:
        return None
    return min(inside, key=lambda c: (abs(c - anchor), c))


def build_comparison(
    table: SequenceTable,
    g_max: int,
    params: TransitionParams,
    *,
    maternal: GenerationPartition | None = None,
) -> ComparisonTable:
    """Assemble maternal vs Pinn start points, deviations, and transitions per generation.

    Args:
        table: Computed Q-sequence table.
        g_max: Last generation to report.
        params: Transition detector parameters.
        maternal: Precomputed maternal partition (spot 1), computed if omitted.

    Returns:
        The comparison table for g = 1..g_max.

    Raises:
        ValueError: If g_max < 1 or the horizon does not reach generation g_max.
    """
    if g_max < 1:
        raise ValueError(f"g_max must be >= 1, got {g_max}")
    horizon = table.computed_len
    needed_pinn = pinn_start(g_max)
    if needed_pinn > horizon:
        raise ValueError(f"horizon {horizon} too small: need at least {needed_pinn} terms")
    part = maternal if maternal is not None else generation_partition(table, 1)
    if part.generation(g_max) is None:
        raise ValueError(
            f"horizon {horizon} too small: maternal generation {g_max} not reached; "
            f"need more than {horizon} terms",
        )

    transitions = detect_transitions(table, params)
    rows: list[ComparisonRow] = []
    for g in range(1, g_max + 1):
        rec = part.generation(g)
        assert rec is not None
        prev = part.generation(g - 1)
        lo = prev.alpha if prev is not None else 0
        a_pinn = pinn_start(g)
        rows.append(
            ComparisonRow(
                g=g,
                alpha_maternal=rec.alpha,
                alpha_pinn=a_pinn,
                dev_maternal=deviation(table, rec.alpha) if rec.alpha >= 2 else None,
                dev_pinn=deviation(table, a_pinn) if a_pinn >= 2 else None,
                transition=_nearest(transitions, lo, rec.beta, rec.alpha),
            ),
        )
    mismatched = [
        row.g for row in rows if row.g <= len(PINN_TABULATED) and not row.start_points_match
    ]
    if mismatched:
        logger.info("Tabulated Pinn start points differ", extra={"generations": mismatched})
    return ComparisonTable(rows=tuple(rows), params=params, horizon=horizon)


def comparison_records(comparison: ComparisonTable) -> list[dict[str, Any]]:
    """Return the rows as records with fixed field order (percentages as strings)."""
    return [
        {
            "g": row.g,
            "alpha_maternal": row.alpha_maternal,
            "alpha_pinn": row.alpha_pinn,
            "dev_maternal_pct": format_percent(row.dev_maternal) or None,
            "dev_pinn_pct": format_percent(row.dev_pinn) or None,
            "transition": row.transition,
        }
        for row in comparison.rows
    ]


def comparison_csv(comparison: ComparisonTable) -> str:
    """Render the comparison as CSV with a single header row."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COMPARISON_HEADER)
    for rec in comparison_records(comparison):
        writer.writerow(["" if rec[key] is None else rec[key] for key in COMPARISON_HEADER])
    return buf.getvalue()


def comparison_text(comparison: ComparisonTable) -> str:
    """Render the comparison as aligned text, flagging tabulated start-point mismatches."""
    p = comparison.params
    lines = [
        f"# horizon={comparison.horizon} window={p.window} "
        f"quiet_threshold={p.quiet_threshold} spike_factor={p.spike_factor}",
        f"{'g':>3} {'alpha_1(g)':>10} {'dev%':>6} {'alpha(g,pi)':>11} {'dev%':>6} "
        f"{'transition':>10}",
    ]
    flagged: list[int] = []
    for row in comparison.rows:
        mark = ""
        if row.g <= len(PINN_TABULATED) and not row.start_points_match:
            mark = " *"
            flagged.append(row.g)
        transition = "" if row.transition is None else str(row.transition)
        lines.append(
            f"{row.g:>3} {row.alpha_maternal:>10} {format_percent(row.dev_maternal):>6} "
            f"{row.alpha_pinn:>11} {format_percent(row.dev_pinn):>6} {transition:>10}{mark}",
        )
    if flagged:
        gens = ", ".join(str(g) for g in flagged)
        lines.append(f"* tabulated Pinn start point differs from the maternal one (g = {gens})")
    return "\n".join(lines)


def check_early_doubling(table: SequenceTable, *, g_last: int = 10) -> CheckReport:
    """Check that early maternal start points of Q double and hit powers of two.

    For 2 <= g <= g_last: alpha_1(g) = 3 * 2^(g-2) and Q(alpha_1(g)) = 2^(g-1) is the first
    occurrence of that value. The note records where the doubling first breaks.

    Args:
        table: Computed Q-sequence table.
        g_last: Last generation checked.

    Returns:
        The check report.

    Raises:
        ValueError: If the table does not reach 3 * 2^(g_last - 2).
    """
    needed = 3 * 2 ** (g_last - 2)
    if table.computed_len < needed:
        raise ValueError(f"horizon {table.computed_len} too small: need {needed} terms")
    part = generation_partition(table, 1)
    terms = table.terms
    builder = ReportBuilder(name="q-early-doubling", lo=1, hi=needed)
    for g in range(2, g_last + 1):
        rec = part.generation(g)
        expected_alpha = 3 * 2 ** (g - 2)
        actual_alpha = rec.alpha if rec is not None else 0
        if not builder.expect(
            index=g,
            expected=expected_alpha,
            actual=actual_alpha,
            detail=f"maternal start of generation {g}",
        ):
            break
        value = 2 ** (g - 1)
        builder.expect(
            index=expected_alpha,
            expected=value,
            actual=table[expected_alpha],
            detail=f"Q at start of generation {g}",
        )
        hits = np.flatnonzero(terms == value)
        first = int(hits[0]) + 1 if hits.size else 0
        builder.expect(
            index=expected_alpha,
            expected=expected_alpha,
            actual=first,
            detail=f"first occurrence of {value}",
        )

    note = None
    for g in range(g_last + 1, len(part.records) + 1):
        rec = part.generation(g)
        if rec is not None and rec.alpha != 3 * 2 ** (g - 2):
            note = f"doubling breaks at g={g}: alpha={rec.alpha}, doubled={3 * 2 ** (g - 2)}"
            break
    return builder.build(note=note)
