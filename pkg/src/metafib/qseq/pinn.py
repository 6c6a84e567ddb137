"""Pinn's generation start points for the Q-sequence."""

from __future__ import annotations

from math import isqrt

# Found by eye from the graph of Q(n) for the first eleven generations; no formula exists.
PINN_TABULATED: tuple[int, ...] = (1, 3, 6, 12, 23, 48, 96, 192, 384, 768, 1522)


def pinn_start(g: int) -> int:
    """Return the start point of Pinn's g-th generation.

    Tabulated for g <= 11, otherwise floor(2^(g - 1/2)) = isqrt(2^(2g - 1)) in exact
    integer arithmetic.

    Args:
        g: Generation number, at least 1.

    Returns:
        The start index.

    Raises:
        ValueError: If g < 1.
    """
    if g < 1:
        raise ValueError(f"generation must be >= 1, got {g}")
    if g <= len(PINN_TABULATED):
        return PINN_TABULATED[g - 1]
    return isqrt(1 << (2 * g - 1))
