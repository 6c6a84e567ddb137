"""Checks for the slow-growing sequences: Conolly, Conway, Newman-Conway, Grytczuk."""

from __future__ import annotations

import logging

import numpy as np

from metafib.generations.genseq import (
    GenerationPartition,
    first_non_slow,
    generation_partition,
    generation_sequence,
    spot_trace,
)
from metafib.models.types import CheckReport
from metafib.recursion.engine import CompositionRangeError, SequenceTable, compose, evaluate
from metafib.recursion.spec import parse_spec
from metafib.verify.numbers import aux_sequence, is_power_of_two, largest_e_index
from metafib.verify.reports import ReportBuilder

logger = logging.getLogger(__name__)

DEFAULT_E_LIMIT = 10**6


def _expect_slow(builder: ReportBuilder, table: SequenceTable, what: str) -> None:
    bad = first_non_slow(table.values, 1, table.computed_len)
    if bad is not None:
        builder.fail(
            index=bad,
            expected=table[bad - 1],
            actual=table[bad],
            detail=f"{what} is not slow",
        )


def _expect_alphas(
    builder: ReportBuilder,
    part: GenerationPartition,
    expected: dict[int, int],
) -> None:
    """Compare maternal start points against expected values keyed by generation."""
    for g, alpha in expected.items():
        rec = part.generation(g)
        builder.expect(
            index=g,
            expected=alpha,
            actual=rec.alpha if rec is not None else 0,
            detail=f"maternal start point alpha({g})",
        )


def check_conolly(table: SequenceTable, gen_max: int) -> CheckReport:
    """Check the value frequencies and maternal generations of the Conolly sequence.

    Verifies that C is slow; that each value n >= 2 below the final value occurs
    nu2(2n) times; that M_1 assigns [2^(g-1)+1, 2^g] to generation g for
    2 <= g <= gen_max; and that C(2^g) = C(2^g - 1) = 2^(g-1).

    Args:
        table: Conolly table covering at least 2^gen_max terms.
        gen_max: Last generation checked.

    Returns:
        The check report; its note records the count of the value 1.

    Raises:
        ValueError: If the horizon is below 2^gen_max or gen_max < 2.
    """
    if gen_max < 2:
        raise ValueError(f"gen_max must be >= 2, got {gen_max}")
    horizon = 1 << gen_max
    if table.computed_len < horizon:
        raise ValueError(f"horizon {table.computed_len} too small: need {horizon} terms")

    builder = ReportBuilder(name="conolly", lo=1, hi=horizon)
    _expect_slow(builder, table, "C")

    terms = table.terms
    final_value = int(terms[-1])
    counts = np.bincount(terms)
    if final_value > 2:
        v = np.arange(2, final_value, dtype=np.int64)
        expected = np.log2(v & -v).astype(np.int64) + 1
        actual = counts[2:final_value]
        bad = np.flatnonzero(actual != expected)
        if bad.size:
            i = int(bad[0])
            builder.fail(
                index=int(v[i]),
                expected=int(expected[i]),
                actual=int(actual[i]),
                detail=f"occurrences of value {int(v[i])}",
            )

    maternal = generation_sequence(spot_trace(table, 1), table.spec.r).values
    want = np.ones(horizon + 1, dtype=np.int64)
    for g in range(2, gen_max + 1):
        want[(1 << (g - 1)) + 1 : (1 << g) + 1] = g
    bad = np.flatnonzero(maternal[1 : horizon + 1] != want[1:])
    if bad.size:
        n = int(bad[0]) + 1
        builder.fail(
            index=n,
            expected=int(want[n]),
            actual=int(maternal[n]),
            detail="maternal generation of n",
        )

    for g in range(2, gen_max + 1):
        half = 1 << (g - 1)
        builder.expect(index=1 << g, expected=half, actual=table[1 << g], detail="C(2^g)")
        builder.expect(
            index=(1 << g) - 1,
            expected=half,
            actual=table[(1 << g) - 1],
            detail="C(2^g - 1)",
        )

    ones = int(counts[1]) if counts.shape[0] > 1 else 0
    note = (
        f"frequencies checked for 2 <= n < {final_value}; value 1 occurs {ones} times "
        "(both initial conditions)"
    )
    return builder.build(note=note)


def check_conway_octaves(table: SequenceTable, m_max: int) -> CheckReport:
    """Check the octave properties and maternal start points of the Conway sequence.

    Verifies A(2^m) = 2^(m-1) for 1 <= m <= m_max; for 2 <= m <= m_max the value 2^m is
    taken on exactly the last m indices of octave [2^m, 2^(m+1)); 2A(n) >= n for n >= 2
    with equality exactly at powers of 2; and alpha_1(g) = 2^(g-1) + 1 for g > 1.

    The tail value is 2^m, not 2^(m-1): A(2^m) = 2^(m-1) opens the octave and the
    sequence reaches 2^m on its last m indices (A(7) = 4 for m = 2). The form
    stating 2^(m-1) on the tail fails on every octave checked.

    Args:
        table: Conway table covering at least 2^(m_max+1) terms.
        m_max: Last octave checked.

    Returns:
        The check report.

    Raises:
        ValueError: If the horizon is too small or m_max < 1.
    """
    if m_max < 1:
        raise ValueError(f"m_max must be >= 1, got {m_max}")
    horizon = 1 << (m_max + 1)
    if table.computed_len < horizon:
        raise ValueError(f"horizon {table.computed_len} too small: need {horizon} terms")

    builder = ReportBuilder(name="conway-octaves", lo=1, hi=horizon)
    _expect_slow(builder, table, "A")

    for m in range(1, m_max + 1):
        builder.expect(index=1 << m, expected=1 << (m - 1), actual=table[1 << m], detail="A(2^m)")

    for m in range(2, m_max + 1):
        top = 1 << m
        end = (1 << (m + 1)) - 1
        for n in range(end - m + 1, end + 1):
            builder.expect(index=n, expected=top, actual=table[n], detail=f"tail of octave {m}")
        before = end - m
        if table[before] == top:
            builder.fail(
                index=before,
                expected=top - 1,
                actual=table[before],
                detail=f"value 2^{m} starts before the last {m} indices of octave {m}",
            )

    n = np.arange(2, horizon + 1, dtype=np.int64)
    twice = 2 * table.values[2 : horizon + 1]
    below = np.flatnonzero(twice < n)
    if below.size:
        i = int(below[0])
        builder.fail(index=int(n[i]), expected=int(n[i]), actual=int(twice[i]), detail="2A(n) < n")
    equal = (twice == n) != ((n & (n - 1)) == 0)
    if np.any(equal):
        i = int(np.flatnonzero(equal)[0])
        builder.fail(
            index=int(n[i]),
            expected=int(is_power_of_two(int(n[i]))),
            actual=int(twice[i] == n[i]),
            detail="2A(n) = n exactly at powers of 2",
        )

    part = generation_partition(table, 1)
    last_g = len(part.records)
    _expect_alphas(builder, part, {g: (1 << (g - 1)) + 1 for g in range(2, last_g + 1)})
    return builder.build(note=f"{last_g} maternal generations within horizon")


def _e_horizon(step: int, e_limit: int) -> tuple[list[int], int]:
    """Return E (1-based) up to the largest E_n <= e_limit, and that largest index."""
    top = largest_e_index(step, e_limit)
    return aux_sequence(step, top), top


def check_newman_conway(
    r: int,
    gen_max: int | None = None,
    *,
    e_limit: int = DEFAULT_E_LIMIT,
) -> CheckReport:
    """Check the Newman-Conway sequence f_r against its E_n block structure.

    With E_n = E_(n-1) + E_(n-r): f_r is slow; f_r(E_n) = f_r(E_n - 1) = E_(n-r) for
    n > r; and the maternal start points are alpha_1(g) = E_(2r+g-2) + 1 for
    1 < g <= gen_max, with alpha_1(2) = r + 2.

    Args:
        r: Newman-Conway parameter, at least 2 (r = 1 is the Conway sequence).
        gen_max: Last generation checked; defaults to the last one within the horizon.
        e_limit: The horizon is the largest E_n not exceeding this limit.

    Returns:
        The check report.

    Raises:
        ValueError: If r < 2 or generation gen_max starts beyond the horizon.
    """
    if r < 2:
        raise ValueError(f"r must be >= 2, got {r}")
    e, top = _e_horizon(r, e_limit)
    horizon = e[top]
    last_g = top - 2 * r + 1
    if gen_max is None:
        gen_max = last_g
    if gen_max > last_g:
        needed = aux_sequence(r, 2 * r + gen_max - 2)[-1] + 1
        raise ValueError(f"horizon {horizon} too small: need {needed} terms")

    table = evaluate(parse_spec(f"newman:{r}"), horizon)
    builder = ReportBuilder(name=f"newman-conway:{r}", lo=1, hi=horizon)
    if table.terminated_at is not None:
        builder.fail(index=table.terminated_at, expected=0, actual=1, detail="f_r terminated")
        return builder.build()
    _expect_slow(builder, table, "f_r")

    for n in range(r + 1, top + 1):
        builder.expect(index=e[n], expected=e[n - r], actual=table[e[n]], detail="f_r(E_n)")
        builder.expect(
            index=e[n] - 1,
            expected=e[n - r],
            actual=table[e[n] - 1],
            detail="f_r(E_n - 1)",
        )

    part = generation_partition(table, 1)
    second = part.generation(2)
    builder.expect(
        index=2,
        expected=r + 2,
        actual=second.alpha if second is not None else 0,
        detail="alpha(2) = r + 2",
    )
    _expect_alphas(builder, part, {g: e[2 * r + g - 2] + 1 for g in range(2, gen_max + 1)})
    return builder.build(note=f"generations 2..{gen_max}, E-index up to {top}")


def check_grytczuk(
    k: int,
    gen_max: int | None = None,
    *,
    e_limit: int = DEFAULT_E_LIMIT,
) -> CheckReport:
    """Check the k-fold Conway-family sequence against its E_n block structure.

    With E_n = E_(n-1) + E_(n-k): A is slow; for n > k, A(E_(n+1)) = E_n, E_(n+1) is
    the last index with value E_n, and A^k(E_n - 1) = E_(n-k); the maternal start
    points are alpha_1(g) = E_(k+g-1) + 1 for g > 1.

    Args:
        k: Composition depth, at least 2.
        gen_max: Last generation checked; defaults to the last one within the horizon.
        e_limit: The horizon is the largest E_n not exceeding this limit.

    Returns:
        The check report.

    Raises:
        ValueError: If k < 2 or generation gen_max starts beyond the horizon.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    e, top = _e_horizon(k, e_limit)
    horizon = e[top]
    last_g = top - k
    if gen_max is None:
        gen_max = last_g
    if gen_max > last_g:
        needed = aux_sequence(k, k + gen_max - 1)[-1] + 1
        raise ValueError(f"horizon {horizon} too small: need {needed} terms")

    table = evaluate(parse_spec(f"grytczuk:{k}"), horizon)
    builder = ReportBuilder(name=f"grytczuk:{k}", lo=1, hi=horizon)
    if table.terminated_at is not None:
        builder.fail(index=table.terminated_at, expected=0, actual=1, detail="A terminated")
        return builder.build()
    _expect_slow(builder, table, "A")

    for n in range(k + 1, top):
        at = e[n + 1]
        builder.expect(index=at, expected=e[n], actual=table[at], detail="A(E_(n+1)) = E_n")
        if at + 1 <= horizon and table[at + 1] == e[n]:
            builder.fail(
                index=at + 1,
                expected=e[n] + 1,
                actual=table[at + 1],
                detail=f"E_(n+1) is not the last occurrence of {e[n]}",
            )
    for n in range(k + 1, top + 1):
        try:
            value = compose(table, e[n] - 1, k)
        except CompositionRangeError as exc:
            builder.fail(index=e[n] - 1, expected=e[n - k], actual=0, detail=str(exc))
            continue
        builder.expect(index=e[n] - 1, expected=e[n - k], actual=value, detail="A^k(E_n - 1)")

    part = generation_partition(table, 1)
    _expect_alphas(builder, part, {g: e[k + g - 1] + 1 for g in range(2, gen_max + 1)})
    return builder.build(note=f"generations 2..{gen_max}, E-index up to {top}")
