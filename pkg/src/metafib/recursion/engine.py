"""Memoized evaluation of recursion specs with the termination rule."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from metafib.recursion.spec import ConwayFamily, HomogeneousFamily, RecursionSpec

logger = logging.getLogger(__name__)

INT64_MAX = int(np.iinfo(np.int64).max)

IntArray = npt.NDArray[np.int64]


class CompositionRangeError(IndexError):
    """Raised when an intermediate value of A^k(n) is not a valid table index."""

    def __init__(self, message: str, *, depth: int) -> None:
        super().__init__(message)
        self.depth = depth


class TableStateError(RuntimeError):
    """Raised when an operation is not allowed in the table's current state."""


class SequenceOverflowError(OverflowError):
    """Raised when a term does not fit in a signed 64-bit integer."""


def _freeze(values: list[int]) -> IntArray:
    """Convert a 1-based value list (slot 0 unused) to a read-only int64 array."""
    arr = np.asarray(values, dtype=np.int64)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class SequenceTable:
    """Computed values T(1..computed_len) of one recursion spec.

    `values` is 1-based: ``values[n] == T(n)``; ``values[0]`` is an unused 0.
    """

    spec: RecursionSpec
    values: IntArray
    terminated_at: int | None = None

    @property
    def computed_len(self) -> int:
        """Return the number of terms actually computed."""
        return int(self.values.shape[0]) - 1

    @property
    def terms(self) -> IntArray:
        """Return T(1..computed_len) as a 0-based view."""
        return self.values[1:]

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.computed_len:
            raise IndexError(f"index {n} outside computed range [1, {self.computed_len}]")
        return int(self.values[n])

    def __len__(self) -> int:
        return self.computed_len

    def head(self, m: int) -> SequenceTable:
        """Return the prefix table T(1..m).

        Args:
            m: Prefix length, 1 <= m <= computed_len.

        Returns:
            A table sharing the first m values. It keeps ``terminated_at`` only when m is
            the full length, so a terminated table of n - 1 terms returns itself.

        Raises:
            ValueError: If m is outside [1, computed_len].
        """
        if not 1 <= m <= self.computed_len:
            raise ValueError(f"prefix length {m} outside [1, {self.computed_len}]")
        if m == self.computed_len:
            return self
        return SequenceTable(spec=self.spec, values=self.values[: m + 1])


def _advance_homogeneous(values: list[int], family: HomogeneousFamily, stop: int) -> int | None:
    """Append T(len(values))..T(stop); return the termination index if any."""
    params = family.params
    for n in range(len(values), stop + 1):
        total = 0
        for a, b in params:
            inner = n - b
            if inner < 1 or inner >= n:
                return n
            spot = n - a - values[inner]
            if spot < 1 or spot >= n:
                return n
            total += values[spot]
        if total > INT64_MAX:
            raise SequenceOverflowError(f"T({n}) = {total} exceeds the int64 range")
        values.append(total)
    return None


def _advance_conway(values: list[int], family: ConwayFamily, stop: int) -> int | None:
    """Append A(len(values))..A(stop); return the termination index if any."""
    k = family.k
    for n in range(len(values), stop + 1):
        m = n - 1
        for _ in range(k):
            m = values[m]
            if m < 1 or m >= n:
                return n
        # m in [1, n-1] keeps the mother spot n - m in range too.
        total = values[n - m] + values[m]
        if total > INT64_MAX:
            raise SequenceOverflowError(f"A({n}) = {total} exceeds the int64 range")
        values.append(total)
    return None


def _advance(values: list[int], spec: RecursionSpec, stop: int) -> int | None:
    family = spec.family
    try:
        if isinstance(family, HomogeneousFamily):
            terminated = _advance_homogeneous(values, family, stop)
        else:
            terminated = _advance_conway(values, family, stop)
    except SequenceOverflowError:
        logger.error("Sequence overflow", extra={"spec": str(spec), "computed": len(values) - 1})
        raise
    if terminated is not None:
        logger.info(
            "Sequence terminated",
            extra={"spec": str(spec), "terminated_at": terminated},
        )
    return terminated


def evaluate(spec: RecursionSpec, n_max: int) -> SequenceTable:
    """Evaluate a recursion to n_max terms.

    Every spot index (and every inner lookup) for n > r must lie in [1, n - 1];
    the first n violating this is recorded as `terminated_at` and evaluation stops.

    Args:
        spec: Recursion specification.
        n_max: Number of terms requested (at least the number of initial conditions).

    Returns:
        The computed table.

    Raises:
        ValueError: If n_max is smaller than the number of initial conditions.
        SequenceOverflowError: If a term exceeds the int64 range.
    """
    if n_max < spec.r:
        raise ValueError(f"n_max={n_max} is smaller than the {spec.r} initial conditions")
    values = [0, *spec.initial_conditions]
    terminated = _advance(values, spec, n_max)
    return SequenceTable(spec=spec, values=_freeze(values), terminated_at=terminated)


def extend(table: SequenceTable, new_n_max: int) -> SequenceTable:
    """Continue evaluation of a table to a larger horizon.

    Args:
        table: A non-terminated table.
        new_n_max: New horizon, greater than the computed length.

    Returns:
        A table equal to ``evaluate(table.spec, new_n_max)``.

    Raises:
        TableStateError: If the table has terminated.
        ValueError: If new_n_max does not exceed the computed length.
    """
    if table.terminated_at is not None:
        raise TableStateError(f"cannot extend a table terminated at {table.terminated_at}")
    if new_n_max <= table.computed_len:
        raise ValueError(
            f"new_n_max={new_n_max} must exceed computed length {table.computed_len}",
        )
    values: list[int] = table.values.tolist()
    terminated = _advance(values, table.spec, new_n_max)
    return SequenceTable(spec=table.spec, values=_freeze(values), terminated_at=terminated)


def compose(table: SequenceTable, n: int, k: int) -> int:
    """Return A^k(n), the k-fold composition of the tabulated function.

    Args:
        table: Computed table.
        n: Starting index.
        k: Number of applications (0 returns n).

    Returns:
        A(A(...A(n)...)).

    Raises:
        ValueError: If k is negative.
        CompositionRangeError: If n or an intermediate value is not a valid index.
    """
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    limit = table.computed_len
    m = n
    for depth in range(k):
        if not 1 <= m <= limit:
            raise CompositionRangeError(
                f"value {m} at depth {depth} is outside [1, {limit}]",
                depth=depth,
            )
        m = int(table.values[m])
    return m
