"""Auxiliary number sequences used by the checks."""

from __future__ import annotations


def aux_sequence(step: int, n_max: int) -> list[int]:
    """Return E_1..E_{n_max} with E_n = E_{n-1} + E_{n-step} and E_1..E_step = 1.

    The list is 1-based: ``e[n] == E_n`` and ``e[0]`` is an unused 0. With step 2 these
    are the Fibonacci numbers; with step 1, E_n = 2^(n-1).

    Args:
        step: Recursion lag (k for Grytczuk's family, r for Newman-Conway).
        n_max: Number of terms.

    Returns:
        The 1-based list of terms.

    Raises:
        ValueError: If step < 1 or n_max < 0.
    """
    if step < 1:
        raise ValueError(f"step must be >= 1, got {step}")
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    e = [0]
    for n in range(1, n_max + 1):
        e.append(1 if n <= step else e[n - 1] + e[n - step])
    return e


def largest_e_index(step: int, limit: int) -> int:
    """Return the largest n with E_n <= limit (for limit >= 1)."""
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    e = [0]
    n = 0
    while True:
        n += 1
        value = 1 if n <= step else e[n - 1] + e[n - step]
        if value > limit:
            return n - 1
        e.append(value)


def nu2(n: int) -> int:
    """Return the exponent of the highest power of 2 dividing n (n >= 1)."""
    if n < 1:
        raise ValueError(f"nu2 is defined for positive integers, got {n}")
    return (n & -n).bit_length() - 1


def is_power_of_two(n: int) -> bool:
    """Return whether n is a positive power of two (including 1)."""
    return n > 0 and n & (n - 1) == 0
