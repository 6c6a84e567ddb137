"""Checks for the mu-sequence (1,2,2,1) and its maternal generations."""

from __future__ import annotations

import logging

import numpy as np

from metafib.generations.genseq import first_non_slow, generation_sequence, partition, spot_trace
from metafib.models.types import CheckReport
from metafib.recursion.engine import IntArray, evaluate
from metafib.recursion.spec import parse_spec
from metafib.verify.reports import ReportBuilder

logger = logging.getLogger(__name__)

DEFAULT_MU_HORIZON = (1 << 20) + 20

MU_FIRST_50: tuple[int, ...] = (
    1, 1, 1, 2, 2, 2, 3, 3, 4, 4,
    4, 5, 5, 6, 7, 7, 7, 8, 8, 8,
    9, 9, 10, 11, 11, 11, 13, 12, 14, 13,
    14, 15, 15, 15, 16, 16, 16, 17, 17, 18,
    19, 19, 19, 21, 20, 22, 21, 22, 24, 24,
)  # fmt: skip


def _run_length(values: IntArray, start: int, step: int, value: int) -> int:
    """Count consecutive entries equal to value walking from start by step (1-based)."""
    count = 0
    n = start
    last = int(values.shape[0]) - 1
    while 1 <= n <= last and int(values[n]) == value:
        count += 1
        n += step
    return count


def _check_power_runs(builder: ReportBuilder, values: IntArray) -> int:
    """Check the run structure around each fully contained power of two.

    A power 2^j counts as contained when its last occurrence and the two entries after
    it lie inside the horizon and the value following them exceeds 2^j + 1. Returns the
    largest exponent checked.
    """
    terms = values[1:]
    last_index = int(terms.shape[0])
    j = 1
    while True:
        v = 1 << j
        where = np.flatnonzero(terms == v) + 1
        if where.size == 0:
            if int(terms.max()) > v:
                skipped = int(np.argmax(terms > v)) + 1
                builder.fail(index=skipped, expected=3, actual=0, detail=f"occurrences of {v}")
            break
        after = int(where[-1]) + 3
        if after > last_index or int(values[after]) <= v + 1:
            break
        if not builder.expect(
            index=int(where[0]),
            expected=3,
            actual=int(where.size),
            detail=f"occurrences of {v}",
        ):
            break
        first, last = int(where[0]), int(where[-1])
        builder.expect(index=first, expected=2, actual=last - first, detail=f"run of {v} spread")
        before = _run_length(values, first - 1, -1, v - 1)
        if before < 2:
            builder.fail(
                index=first - 1,
                expected=2,
                actual=before,
                detail=f"occurrences of {v - 1} just before the run of {v}",
            )
        builder.expect(
            index=last + 1,
            expected=2,
            actual=_run_length(values, last + 1, 1, v + 1),
            detail=f"occurrences of {v + 1} just after the run of {v}",
        )
        j += 1
    return j - 1


def check_mu(n_max: int = DEFAULT_MU_HORIZON) -> CheckReport:
    """Check the published regularities and the generation conjecture for mu.

    Verifies the first 50 values; the run structure of every contained power of two
    (three consecutive hits, at least two of 2^j - 1 before, exactly two of 2^j + 1
    after); that the maternal generation sequence is slow; and, for g >= 3 within the
    horizon, alpha(g) = 2^(g-1) + g holding the first 2^(g-2) + 1, and for complete
    generations beta(g) = 2^g + g holding the last 2^(g-1).

    Args:
        n_max: Horizon, at least 50.

    Returns:
        The check report; termination inside the horizon is reported as a failure.

    Raises:
        ValueError: If n_max < 50.
    """
    if n_max < len(MU_FIRST_50):
        raise ValueError(f"n_max must be >= {len(MU_FIRST_50)}, got {n_max}")
    table = evaluate(parse_spec("mu"), n_max)
    builder = ReportBuilder(name="mu", lo=1, hi=n_max)
    if table.terminated_at is not None:
        builder.fail(
            index=table.terminated_at,
            expected=0,
            actual=1,
            detail="mu terminated inside the horizon",
        )
        return builder.build()

    values = table.values
    terms = table.terms
    for n, want in enumerate(MU_FIRST_50, start=1):
        builder.expect(index=n, expected=want, actual=table[n], detail="tabulated value")

    top_power = _check_power_runs(builder, values)

    gens = generation_sequence(spot_trace(table, 1), table.spec.r)
    bad = first_non_slow(gens.values, 1, n_max)
    if bad is not None:
        builder.fail(
            index=bad,
            expected=int(gens.values[bad - 1]),
            actual=int(gens.values[bad]),
            detail="maternal generation sequence is not slow",
        )

    part = partition(gens)
    g = 3
    while (1 << (g - 1)) + g <= n_max:
        rec = part.generation(g)
        alpha = (1 << (g - 1)) + g
        if not builder.expect(
            index=g,
            expected=alpha,
            actual=rec.alpha if rec is not None else 0,
            detail=f"start of maternal generation {g}",
        ):
            break
        first_value = (1 << (g - 2)) + 1
        builder.expect(index=alpha, expected=first_value, actual=table[alpha], detail="mu(alpha)")
        firsts = np.flatnonzero(terms == first_value)
        builder.expect(
            index=alpha,
            expected=alpha,
            actual=int(firsts[0]) + 1 if firsts.size else 0,
            detail=f"first occurrence of {first_value}",
        )
        assert rec is not None
        if rec.complete:
            beta = (1 << g) + g
            builder.expect(
                index=g,
                expected=beta,
                actual=rec.beta,
                detail=f"end of generation {g}",
            )
            last_value = 1 << (g - 1)
            if beta <= n_max:
                builder.expect(
                    index=beta,
                    expected=last_value,
                    actual=table[beta],
                    detail="mu(beta)",
                )
                hits = np.flatnonzero(terms == last_value)
                builder.expect(
                    index=beta,
                    expected=beta,
                    actual=int(hits[-1]) + 1 if hits.size else 0,
                    detail=f"last occurrence of {last_value}",
                )
        g += 1

    return builder.build(
        note=f"horizon {n_max}; powers up to 2^{top_power}; generations 3..{g - 1}",
    )
