"""Spot sequences, spot-based generation sequences, and generation partitions."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from metafib.recursion.engine import IntArray, SequenceTable
from metafib.recursion.spec import HomogeneousFamily, spot_count

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpotTrace:
    """Values of the spot function S_p(n) for first_index <= n <= computed_len.

    `values` is 1-based like the table; entries for n < first_index are 0.
    """

    p: int
    first_index: int
    values: IntArray

    @property
    def last_index(self) -> int:
        """Return the last index covered by the trace."""
        return int(self.values.shape[0]) - 1


@dataclass(frozen=True)
class GenerationSequence:
    """Generation numbers M_p(n) for 1 <= n <= computed_len (1-based, slot 0 unused)."""

    p: int
    values: IntArray

    @property
    def last_index(self) -> int:
        """Return the last index covered by the sequence."""
        return int(self.values.shape[0]) - 1


@dataclass(frozen=True)
class GenerationRecord:
    """Extent of one generation G_p(g) within the computed range."""

    g: int
    alpha: int
    beta: int
    size: int
    fragmented: bool
    complete: bool


@dataclass(frozen=True)
class GenerationPartition:
    """All generations of one generation sequence, ordered by g."""

    p: int
    records: tuple[GenerationRecord, ...]
    interval_structure: bool

    def generation(self, g: int) -> GenerationRecord | None:
        """Return the record for generation g, or None if g is not present."""
        if 1 <= g <= len(self.records):
            return self.records[g - 1]
        return None

    @property
    def complete_records(self) -> tuple[GenerationRecord, ...]:
        """Return the generations whose membership is fully observed."""
        return tuple(rec for rec in self.records if rec.complete)


def _readonly(arr: npt.NDArray[np.int64]) -> IntArray:
    arr.flags.writeable = False
    return arr


def spot_trace(table: SequenceTable, p: int) -> SpotTrace:
    """Compute S_p(n) over the computed range of a table.

    Homogeneous: S_p(n) = n - a_p - T(n - b_p). Conway family: S_1(n) = n - A^k(n-1)
    and S_2(n) = A^k(n-1).

    Args:
        table: Computed table.
        p: Spot index, 1-based.

    Returns:
        The spot trace for n in (r, computed_len].

    Raises:
        ValueError: If p is not a valid spot index for the table's spec.
    """
    count = spot_count(table.spec)
    if not 1 <= p <= count:
        raise ValueError(f"spot {p} outside [1, {count}]")

    r = table.spec.r
    last = table.computed_len
    t = table.values
    out = np.zeros(last + 1, dtype=np.int64)
    if last > r:
        n = np.arange(r + 1, last + 1, dtype=np.int64)
        family = table.spec.family
        if isinstance(family, HomogeneousFamily):
            a, b = family.params[p - 1]
            out[r + 1 :] = n - a - t[n - b]
        else:
            m = n - 1
            for _ in range(family.k):
                m = t[m]
            out[r + 1 :] = n - m if p == 1 else m
    return SpotTrace(p=p, first_index=r + 1, values=_readonly(out))


def generation_sequence(trace: SpotTrace, r: int) -> GenerationSequence:
    """Compute M_p(n) = M_p(S_p(n)) + 1 with M_p(n) = 1 for n <= r.

    Args:
        trace: Spot trace covering (r, last_index].
        r: Number of initial conditions of the underlying recursion.

    Returns:
        The generation sequence.
    """
    spots: list[int] = trace.values.tolist()
    last = trace.last_index
    gens = [0] + [1] * min(r, last)
    for n in range(r + 1, last + 1):
        gens.append(gens[spots[n]] + 1)
    return GenerationSequence(p=trace.p, values=_readonly(np.asarray(gens, dtype=np.int64)))


def partition(gen: GenerationSequence) -> GenerationPartition:
    """Derive per-generation extents and fragmentation from M_p.

    The generation with the largest number is marked incomplete, since members may lie
    beyond the horizon; only complete generations decide `interval_structure`.

    Args:
        gen: Nonempty generation sequence.

    Returns:
        The generation partition.

    Raises:
        ValueError: If the sequence is empty.
    """
    vals = gen.values[1:]
    size = int(vals.shape[0])
    if size == 0:
        raise ValueError("generation sequence is empty")

    gs, first, counts = np.unique(vals, return_index=True, return_counts=True)
    _, last_rev = np.unique(vals[::-1], return_index=True)
    alphas = first + 1
    betas = size - last_rev
    fragmented = counts != (betas - alphas + 1)

    top = int(gs[-1])
    records = tuple(
        GenerationRecord(
            g=int(g),
            alpha=int(a),
            beta=int(b),
            size=int(c),
            fragmented=bool(f),
            complete=int(g) != top,
        )
        for g, a, b, c, f in zip(gs, alphas, betas, counts, fragmented, strict=True)
    )
    interval_structure = not any(rec.fragmented for rec in records if rec.complete)
    if not interval_structure:
        first_bad = next(rec.g for rec in records if rec.complete and rec.fragmented)
        logger.info(
            "Fragmented generation found",
            extra={"spot": gen.p, "generation": first_bad},
        )
    return GenerationPartition(p=gen.p, records=records, interval_structure=interval_structure)


def generation_partition(table: SequenceTable, p: int) -> GenerationPartition:
    """Compute the partition of a table's generation sequence based on spot p."""
    return partition(generation_sequence(spot_trace(table, p), table.spec.r))


def is_slow(values: npt.ArrayLike, lo: int, hi: int) -> bool:
    """Return whether values[lo..hi] is nondecreasing with steps of 0 or 1.

    Args:
        values: Integer array, indexed as given (1-based arrays keep slot 0 unused).
        lo: First index of the range.
        hi: Last index of the range (inclusive).

    Returns:
        True iff every successive difference on [lo, hi] is 0 or 1.

    Raises:
        ValueError: If the range is empty or outside the array.
    """
    arr = np.asarray(values)
    if lo >= hi:
        raise ValueError(f"empty range [{lo}, {hi}]")
    if lo < 0 or hi >= arr.shape[0]:
        raise ValueError(f"range [{lo}, {hi}] outside array of length {arr.shape[0]}")
    diff = np.diff(arr[lo : hi + 1])
    return bool(np.all((diff == 0) | (diff == 1)))


def first_non_slow(values: npt.ArrayLike, lo: int, hi: int) -> int | None:
    """Return the first index n in (lo, hi] where values[n] - values[n-1] is not 0 or 1."""
    arr = np.asarray(values)
    diff = np.diff(arr[lo : hi + 1])
    bad = np.flatnonzero((diff != 0) & (diff != 1))
    if bad.size == 0:
        return None
    return lo + int(bad[0]) + 1
